#pragma once

// Knowledge-graph storage: label vocabularies, a deduplicated triple list and
// CSR adjacency in both directions. A KnowledgeGraph never changes after
// construction.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace fairkg {

struct EntityId {
  std::uint32_t value = 0;
  friend auto operator<=>(EntityId, EntityId) = default;
};

struct RelationId {
  std::uint32_t value = 0;
  friend auto operator<=>(RelationId, RelationId) = default;
};

struct Triple {
  EntityId head;
  RelationId relation;
  EntityId tail;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept;
};

/// Dense label <-> index map; indices follow first insertion.
class Vocabulary {
 public:
  std::uint32_t intern(std::string_view label);
  std::optional<std::uint32_t> find(std::string_view label) const;
  const std::string& label(std::uint32_t index) const { return labels_.at(index); }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct Neighbor {
  RelationId relation;
  EntityId entity;
};

class KnowledgeGraph {
 public:
  /// Drops duplicate triples (keeping the first) and validates every index.
  /// Throws Error when `entities` is empty.
  KnowledgeGraph(Vocabulary entities, Vocabulary relations, std::vector<Triple> triples);

  const Vocabulary& entities() const noexcept { return entities_; }
  const Vocabulary& relations() const noexcept { return relations_; }
  std::size_t num_entities() const noexcept { return entities_.size(); }
  std::size_t num_relations() const noexcept { return relations_.size(); }
  std::span<const Triple> triples() const noexcept { return triples_; }

  /// (relation, tail) pairs of triples whose head is `e`.
  std::span<const Neighbor> out_edges(EntityId e) const;
  /// (relation, head) pairs of triples whose tail is `e`.
  std::span<const Neighbor> in_edges(EntityId e) const;

  bool contains(const Triple& t) const { return lookup_.contains(t); }
  /// True when some triple joins a and b with `relation`, in either direction.
  bool linked(EntityId a, RelationId relation, EntityId b) const;

  std::optional<EntityId> find_entity(std::string_view label) const;
  std::optional<RelationId> find_relation(std::string_view label) const;
  const std::string& entity_label(EntityId e) const { return entities_.label(e.value); }
  const std::string& relation_label(RelationId r) const { return relations_.label(r.value); }

  /// Same vocabularies, restricted to `triples`.
  KnowledgeGraph with_triples(std::vector<Triple> triples) const;

  /// Number of input triples dropped as duplicates.
  std::size_t duplicates_dropped() const noexcept { return duplicates_; }

  /// FNV-1a digest of both vocabularies, used to pair checkpoints with graphs.
  std::uint64_t vocabulary_hash() const;

 private:
  Vocabulary entities_;
  Vocabulary relations_;
  std::vector<Triple> triples_;
  std::unordered_set<Triple, TripleHash> lookup_;
  std::vector<std::size_t> out_offsets_, in_offsets_;
  std::vector<Neighbor> out_, in_;
  std::size_t duplicates_ = 0;
};

/// Builds a graph from labelled triples in insertion order.
class GraphBuilder {
 public:
  void add(std::string_view head, std::string_view relation, std::string_view tail);
  /// Registers an entity even when no triple mentions it.
  EntityId add_entity(std::string_view label);
  RelationId add_relation(std::string_view label);
  void add(EntityId head, RelationId relation, EntityId tail);
  /// Triples added so far, duplicates included.
  const std::vector<Triple>& pending() const noexcept { return triples_; }
  KnowledgeGraph build() &&;

 private:
  Vocabulary entities_;
  Vocabulary relations_;
  std::vector<Triple> triples_;
};

// ---------------------------------------------------------------------------
// Triple files: one `head<TAB>relation<TAB>tail` per non-empty line.

/// Parses a triple file. Throws ParseError (with line number) on a line that
/// does not hold exactly three tab-separated fields, Error on an empty file.
KnowledgeGraph load_triples(const std::filesystem::path& path);
KnowledgeGraph parse_triples(std::istream& in, const std::string& source = "<stream>");

void write_triples(std::ostream& out, const KnowledgeGraph& graph, std::span<const Triple> triples);
void save_triples(const std::filesystem::path& path, const KnowledgeGraph& graph);

// ---------------------------------------------------------------------------
// Sensitive / non-sensitive attribute sets.

struct SensitiveConfig {
  std::vector<EntityId> sensitive;      // S
  RelationId sensitive_relation;        // r_s
  std::vector<EntityId> nonsensitive;   // C
  RelationId nonsensitive_relation;     // r_c

  bool is_sensitive(EntityId e) const;
  bool is_nonsensitive(EntityId e) const;
  /// C(|S|, 2).
  std::size_t pair_count() const { return sensitive.size() * (sensitive.size() - 1) / 2; }
};

/// Label form of SensitiveConfig, as read from a config file. A single "*" in
/// `nonsensitive` selects every entity reached through `nonsensitive_relation`
/// from an entity outside S.
struct SensitiveLabels {
  std::vector<std::string> sensitive;
  std::string sensitive_relation;
  std::vector<std::string> nonsensitive;
  std::string nonsensitive_relation;
};

/// Resolves labels against `graph` and checks the invariants: S and C
/// disjoint, |S| >= 2, |C| >= 1, every label present. Throws ConfigError.
SensitiveConfig resolve_sensitive(const KnowledgeGraph& graph, const SensitiveLabels& labels);
SensitiveLabels sensitive_labels(const KnowledgeGraph& graph, const SensitiveConfig& config);

/// Sensitive value of `e`: the first s in S with an r_s triple touching e.
std::optional<EntityId> sensitive_value_of(const KnowledgeGraph& graph, const SensitiveConfig& config,
                                           EntityId e);

// ---------------------------------------------------------------------------
// Splits.

struct SplitRatios {
  double train = 0.7;
  double valid = 0.1;
  double test = 0.2;
};

struct SplitSet {
  std::vector<Triple> train;
  std::vector<Triple> valid;
  std::vector<Triple> test;
  std::uint64_t seed = 0;
};

/// Seeded partition of the graph's triples. Triples whose tail is a sensitive
/// entity are allocated per sensitive value, so each split carries every
/// value within one triple of its proportional share. Triples keep graph
/// order inside each split.
SplitSet split(const KnowledgeGraph& graph, SplitRatios ratios, const SensitiveConfig* config,
               std::uint64_t seed);

/// Graph plus the split given by three separate triple files (vocabulary in
/// train, valid, test order).
struct PresplitGraph {
  KnowledgeGraph graph;
  SplitSet splits;
};
PresplitGraph load_presplit(const std::filesystem::path& train, const std::filesystem::path& valid,
                            const std::filesystem::path& test);

// ---------------------------------------------------------------------------
// Biased multi-hop paths.

/// (s_i, r_s, bridge..., r_c, c_j). Intermediate hops between bridge entities
/// may use any relation in either direction.
struct BiasedPath {
  EntityId sensitive;
  RelationId sensitive_relation;
  std::vector<EntityId> bridge;
  RelationId nonsensitive_relation;
  EntityId nonsensitive;

  friend bool operator==(const BiasedPath&, const BiasedPath&) = default;
};

inline constexpr int kMaxPathHops = 4;

/// Every simple path of at most `max_hops` edges (clamped to kMaxPathHops)
/// from some s in S over r_s, through bridge entities outside S and C, to some
/// c in C over r_c. Edge direction is ignored. Sorted lexicographically on
/// (s, bridge..., c). Throws Error when max_hops < 2.
std::vector<BiasedPath> extract_biased_paths(const KnowledgeGraph& graph, const SensitiveConfig& config,
                                             int max_hops = 2);

/// True when every hop of `path` is backed by a triple of `graph`.
bool path_exists(const KnowledgeGraph& graph, const BiasedPath& path);

/// Share of the bridges linked to c_j through r_c that are also linked to s_i
/// through r_s; 0 when c_j has no such bridge. Throws Error if c_j is not in C
/// or s_i not in S.
double two_hop_connectivity(const KnowledgeGraph& graph, EntityId c_j, EntityId s_i,
                            const SensitiveConfig& config);

// ---------------------------------------------------------------------------
// Synthetic biased graphs.

struct SynthGraph {
  KnowledgeGraph graph;
  SensitiveConfig config;
};

struct SynthOptions {
  /// Coupling between the two sensitive values and the non-sensitive entity a
  /// bridge receives; 0 draws non-sensitive entities independently of the
  /// sensitive value.
  double coupling = 0.0;
};

/// Two sensitive entities ("male", "female"), `n_nonsensitive` occupations
/// and `n_bridges` people. Exactly round(bias_ratio * n_bridges) people link
/// to "male" through "has_gender", the rest to "female"; every person links to
/// one occupation through "has_occupation". Deterministic in `seed`.
SynthGraph synth_biased_kg(std::size_t n_bridges, double bias_ratio, std::size_t n_nonsensitive,
                           std::uint64_t seed, SynthOptions options = {});

}  // namespace fairkg
