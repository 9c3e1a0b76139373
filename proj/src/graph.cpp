#include "fairkg/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include "fairkg/error.hpp"

namespace fairkg {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

// Undirected neighbours of `e` reached through `relation`.
template <class Fn>
void for_each_linked(const KnowledgeGraph& g, EntityId e, RelationId relation, Fn&& fn) {
  for (const Neighbor& n : g.out_edges(e)) {
    if (n.relation == relation) fn(n.entity);
  }
  for (const Neighbor& n : g.in_edges(e)) {
    if (n.relation == relation) fn(n.entity);
  }
}

}  // namespace

std::size_t TripleHash::operator()(const Triple& t) const noexcept {
  std::uint64_t h = t.head.value;
  h = h * 0x9E3779B97F4A7C15ULL + t.relation.value;
  h = h * 0x9E3779B97F4A7C15ULL + t.tail.value;
  return static_cast<std::size_t>(h ^ (h >> 29));
}

std::uint32_t Vocabulary::intern(std::string_view label) {
  auto it = index_.find(std::string(label));
  if (it != index_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(labels_.size());
  labels_.emplace_back(label);
  index_.emplace(labels_.back(), id);
  return id;
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

KnowledgeGraph::KnowledgeGraph(Vocabulary entities, Vocabulary relations, std::vector<Triple> triples)
    : entities_(std::move(entities)), relations_(std::move(relations)) {
  if (entities_.size() == 0) throw Error("knowledge graph has no entities");
  triples_.reserve(triples.size());
  lookup_.reserve(triples.size());
  for (const Triple& t : triples) {
    if (t.head.value >= entities_.size() || t.tail.value >= entities_.size() ||
        t.relation.value >= relations_.size()) {
      throw Error("triple references an index outside the vocabularies");
    }
    if (lookup_.insert(t).second) {
      triples_.push_back(t);
    } else {
      ++duplicates_;
    }
  }

  const std::size_t n = entities_.size();
  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (const Triple& t : triples_) {
    ++out_offsets_[t.head.value + 1];
    ++in_offsets_[t.tail.value + 1];
  }
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());
  out_.resize(triples_.size());
  in_.resize(triples_.size());
  std::vector<std::size_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  for (const Triple& t : triples_) {
    out_[out_fill[t.head.value]++] = Neighbor{t.relation, t.tail};
    in_[in_fill[t.tail.value]++] = Neighbor{t.relation, t.head};
  }
}

std::span<const Neighbor> KnowledgeGraph::out_edges(EntityId e) const {
  const auto b = out_offsets_.at(e.value);
  return std::span<const Neighbor>(out_).subspan(b, out_offsets_[e.value + 1] - b);
}

std::span<const Neighbor> KnowledgeGraph::in_edges(EntityId e) const {
  const auto b = in_offsets_.at(e.value);
  return std::span<const Neighbor>(in_).subspan(b, in_offsets_[e.value + 1] - b);
}

bool KnowledgeGraph::linked(EntityId a, RelationId relation, EntityId b) const {
  return contains(Triple{a, relation, b}) || contains(Triple{b, relation, a});
}

std::optional<EntityId> KnowledgeGraph::find_entity(std::string_view label) const {
  if (auto id = entities_.find(label)) return EntityId{*id};
  return std::nullopt;
}

std::optional<RelationId> KnowledgeGraph::find_relation(std::string_view label) const {
  if (auto id = relations_.find(label)) return RelationId{*id};
  return std::nullopt;
}

KnowledgeGraph KnowledgeGraph::with_triples(std::vector<Triple> triples) const {
  return KnowledgeGraph(entities_, relations_, std::move(triples));
}

std::uint64_t KnowledgeGraph::vocabulary_hash() const {
  std::uint64_t h = kFnvOffset;
  for (const auto& label : entities_.labels()) {
    h = fnv1a(h, label);
    h = fnv1a(h, std::string_view("\n", 1));
  }
  h = fnv1a(h, std::string_view("\0", 1));
  for (const auto& label : relations_.labels()) {
    h = fnv1a(h, label);
    h = fnv1a(h, std::string_view("\n", 1));
  }
  return h;
}

void GraphBuilder::add(std::string_view head, std::string_view relation, std::string_view tail) {
  const EntityId h{entities_.intern(head)};
  const RelationId r{relations_.intern(relation)};
  const EntityId t{entities_.intern(tail)};
  triples_.push_back(Triple{h, r, t});
}

EntityId GraphBuilder::add_entity(std::string_view label) { return EntityId{entities_.intern(label)}; }

RelationId GraphBuilder::add_relation(std::string_view label) {
  return RelationId{relations_.intern(label)};
}

void GraphBuilder::add(EntityId head, RelationId relation, EntityId tail) {
  triples_.push_back(Triple{head, relation, tail});
}

KnowledgeGraph GraphBuilder::build() && {
  return KnowledgeGraph(std::move(entities_), std::move(relations_), std::move(triples_));
}

// ---------------------------------------------------------------------------

namespace {

void parse_into(std::istream& in, const std::string& source, GraphBuilder& builder, std::size_t& lines_read) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view rest(line);
    std::string_view fields[3];
    std::size_t count = 0;
    while (true) {
      const auto tab = rest.find('\t');
      if (count < 3) fields[count] = rest.substr(0, tab);
      ++count;
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (count != 3) {
      throw ParseError(source + ": expected 3 tab-separated fields, found " + std::to_string(count), lineno);
    }
    for (const auto& f : fields) {
      if (f.empty()) throw ParseError(source + ": empty field", lineno);
    }
    builder.add(fields[0], fields[1], fields[2]);
    ++lines_read;
  }
}

}  // namespace

KnowledgeGraph parse_triples(std::istream& in, const std::string& source) {
  GraphBuilder builder;
  std::size_t lines = 0;
  parse_into(in, source, builder, lines);
  if (lines == 0) throw Error(source + ": no triples (empty graph)");
  return std::move(builder).build();
}

KnowledgeGraph load_triples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open triple file " + path.string());
  return parse_triples(in, path.string());
}

void write_triples(std::ostream& out, const KnowledgeGraph& graph, std::span<const Triple> triples) {
  for (const Triple& t : triples) {
    out << graph.entity_label(t.head) << '\t' << graph.relation_label(t.relation) << '\t'
        << graph.entity_label(t.tail) << '\n';
  }
}

void save_triples(const std::filesystem::path& path, const KnowledgeGraph& graph) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write triple file " + path.string());
  write_triples(out, graph, graph.triples());
  if (!out) throw Error("failed writing " + path.string());
}

PresplitGraph load_presplit(const std::filesystem::path& train, const std::filesystem::path& valid,
                            const std::filesystem::path& test) {
  GraphBuilder builder;
  std::size_t ends[3] = {0, 0, 0};
  const std::filesystem::path* paths[3] = {&train, &valid, &test};
  for (int i = 0; i < 3; ++i) {
    std::ifstream in(*paths[i]);
    if (!in) throw Error("cannot open triple file " + paths[i]->string());
    std::size_t lines = 0;
    parse_into(in, paths[i]->string(), builder, lines);
    if (i == 0 && lines == 0) throw Error(train.string() + ": no triples (empty graph)");
    ends[i] = builder.pending().size();
  }
  // Duplicates across files stay in the first split that lists them.
  std::vector<Triple> all = builder.pending();
  SplitSet splits;
  std::unordered_set<Triple, TripleHash> seen;
  std::vector<Triple>* lists[3] = {&splits.train, &splits.valid, &splits.test};
  std::size_t begin = 0;
  for (int i = 0; i < 3; ++i) {
    for (std::size_t k = begin; k < ends[i]; ++k) {
      if (seen.insert(all[k]).second) lists[i]->push_back(all[k]);
    }
    begin = ends[i];
  }
  return PresplitGraph{std::move(builder).build(), std::move(splits)};
}

// ---------------------------------------------------------------------------

bool SensitiveConfig::is_sensitive(EntityId e) const {
  return std::find(sensitive.begin(), sensitive.end(), e) != sensitive.end();
}

bool SensitiveConfig::is_nonsensitive(EntityId e) const {
  return std::find(nonsensitive.begin(), nonsensitive.end(), e) != nonsensitive.end();
}

SensitiveConfig resolve_sensitive(const KnowledgeGraph& graph, const SensitiveLabels& labels) {
  SensitiveConfig cfg;
  auto relation = [&](const std::string& label, const char* key) {
    auto r = graph.find_relation(label);
    if (!r) throw ConfigError(std::string(key) + ": unknown relation '" + label + "'");
    return *r;
  };
  auto entity = [&](const std::string& label, const char* key) {
    auto e = graph.find_entity(label);
    if (!e) throw ConfigError(std::string(key) + ": unknown entity '" + label + "'");
    return *e;
  };
  cfg.sensitive_relation = relation(labels.sensitive_relation, "sensitive_relation");
  cfg.nonsensitive_relation = relation(labels.nonsensitive_relation, "nonsensitive_relation");
  std::set<EntityId> seen;
  for (const auto& l : labels.sensitive) {
    const EntityId e = entity(l, "sensitive_entities");
    if (seen.insert(e).second) cfg.sensitive.push_back(e);
  }
  if (labels.nonsensitive.size() == 1 && labels.nonsensitive[0] == "*") {
    std::set<EntityId> found;
    for (const Triple& t : graph.triples()) {
      if (t.relation != cfg.nonsensitive_relation) continue;
      if (!cfg.is_sensitive(t.tail) && !cfg.is_sensitive(t.head)) found.insert(t.tail);
    }
    cfg.nonsensitive.assign(found.begin(), found.end());
  } else {
    std::set<EntityId> ns_seen;
    for (const auto& l : labels.nonsensitive) {
      const EntityId e = entity(l, "nonsensitive_entities");
      if (ns_seen.insert(e).second) cfg.nonsensitive.push_back(e);
    }
  }
  if (cfg.sensitive.size() < 2) throw ConfigError("at least two sensitive entities are required");
  if (cfg.nonsensitive.empty()) throw ConfigError("at least one non-sensitive entity is required");
  for (EntityId c : cfg.nonsensitive) {
    if (cfg.is_sensitive(c)) {
      throw ConfigError("entity '" + graph.entity_label(c) + "' is both sensitive and non-sensitive");
    }
  }
  return cfg;
}

SensitiveLabels sensitive_labels(const KnowledgeGraph& graph, const SensitiveConfig& config) {
  SensitiveLabels out;
  out.sensitive_relation = graph.relation_label(config.sensitive_relation);
  out.nonsensitive_relation = graph.relation_label(config.nonsensitive_relation);
  for (EntityId e : config.sensitive) out.sensitive.push_back(graph.entity_label(e));
  for (EntityId e : config.nonsensitive) out.nonsensitive.push_back(graph.entity_label(e));
  return out;
}

std::optional<EntityId> sensitive_value_of(const KnowledgeGraph& graph, const SensitiveConfig& config,
                                           EntityId e) {
  for (EntityId s : config.sensitive) {
    if (graph.linked(e, config.sensitive_relation, s)) return s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

// Largest-remainder allocation of `n` items over the split ratios. Ties on the
// remainder go to the split that is furthest behind its running target.
std::array<std::size_t, 3> allocate(std::size_t n, const std::array<double, 3>& ratio,
                                    std::array<double, 3>& deficit) {
  std::array<std::size_t, 3> alloc{};
  std::array<double, 3> frac{};
  std::size_t used = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = ratio[i] * static_cast<double>(n);
    alloc[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    frac[i] = std::max(0.0, exact - static_cast<double>(alloc[i]));
    used += alloc[i];
  }
  // Guard against rounding that overshoots n.
  while (used > n) {
    for (int i = 2; i >= 0 && used > n; --i) {
      if (alloc[i] > 0) {
        --alloc[i];
        --used;
      }
    }
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (std::abs(frac[a] - frac[b]) > 1e-9) return frac[a] > frac[b];
    if (std::abs(deficit[a] - deficit[b]) > 1e-9) return deficit[a] > deficit[b];
    return a < b;
  });
  for (std::size_t k = 0; used < n; ++k) {
    const int i = order[k % 3];
    if (ratio[i] > 0.0) {
      ++alloc[i];
      ++used;
    } else if (k > 6) {
      ++alloc[order[0]];
      ++used;
    }
  }
  for (int i = 0; i < 3; ++i) {
    deficit[i] += ratio[i] * static_cast<double>(n) - static_cast<double>(alloc[i]);
  }
  return alloc;
}

}  // namespace

SplitSet split(const KnowledgeGraph& graph, SplitRatios ratios, const SensitiveConfig* config,
               std::uint64_t seed) {
  const std::array<double, 3> r{ratios.train, ratios.valid, ratios.test};
  for (double v : r) {
    if (!(v >= 0.0) || v > 1.0) throw Error("split ratios must lie in [0, 1]");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) throw Error("split ratios must sum to 1");
  const auto positive = static_cast<std::size_t>(std::count_if(r.begin(), r.end(), [](double v) { return v > 0; }));
  const auto triples = graph.triples();
  if (triples.size() < positive) {
    throw Error("cannot split " + std::to_string(triples.size()) + " triples into " +
                std::to_string(positive) + " non-empty parts");
  }

  // Stratum 0 holds triples without a sensitive tail; stratum i+1 those whose
  // tail is the i-th sensitive entity.
  const std::size_t n_strata = 1 + (config ? config->sensitive.size() : 0);
  std::vector<std::vector<std::size_t>> strata(n_strata);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    std::size_t s = 0;
    if (config) {
      for (std::size_t k = 0; k < config->sensitive.size(); ++k) {
        if (triples[i].tail == config->sensitive[k]) s = k + 1;
      }
    }
    strata[s].push_back(i);
  }

  std::mt19937_64 rng(seed);
  std::vector<int> assignment(triples.size(), 0);
  std::array<double, 3> deficit{};
  // Sensitive strata first so the unconstrained stratum absorbs rounding.
  for (std::size_t pass = 0; pass < n_strata; ++pass) {
    auto& members = strata[(pass + 1) % n_strata];
    std::shuffle(members.begin(), members.end(), rng);
    const auto alloc = allocate(members.size(), r, deficit);
    std::size_t pos = 0;
    for (int part = 0; part < 3; ++part) {
      for (std::size_t k = 0; k < alloc[part]; ++k) assignment[members[pos++]] = part;
    }
  }

  SplitSet out;
  out.seed = seed;
  std::vector<Triple>* parts[3] = {&out.train, &out.valid, &out.test};
  for (std::size_t i = 0; i < triples.size(); ++i) parts[assignment[i]]->push_back(triples[i]);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct PathSearch {
  const KnowledgeGraph& graph;
  const SensitiveConfig& config;
  int max_hops;
  std::vector<std::vector<std::uint32_t>> found;  // s, bridge..., c

  bool is_endpoint(EntityId e) const { return config.is_sensitive(e) || config.is_nonsensitive(e); }

  void extend(std::vector<std::uint32_t>& seq) {
    const EntityId last{seq.back()};
    // hops so far: seq.size() - 1; closing with r_c adds one more.
    const int hops = static_cast<int>(seq.size());
    if (hops > max_hops) return;
    for_each_linked(graph, last, config.nonsensitive_relation, [&](EntityId c) {
      if (!config.is_nonsensitive(c)) return;
      auto path = seq;
      path.push_back(c.value);
      found.push_back(std::move(path));
    });
    if (hops + 1 > max_hops) return;
    auto visit = [&](EntityId next) {
      if (is_endpoint(next)) return;
      if (std::find(seq.begin(), seq.end(), next.value) != seq.end()) return;
      seq.push_back(next.value);
      extend(seq);
      seq.pop_back();
    };
    for (const Neighbor& n : graph.out_edges(last)) visit(n.entity);
    for (const Neighbor& n : graph.in_edges(last)) visit(n.entity);
  }
};

}  // namespace

std::vector<BiasedPath> extract_biased_paths(const KnowledgeGraph& graph, const SensitiveConfig& config,
                                             int max_hops) {
  if (max_hops < 2) throw Error("extract_biased_paths: max_hops must be at least 2");
  PathSearch search{graph, config, std::min(max_hops, kMaxPathHops), {}};
  for (EntityId s : config.sensitive) {
    std::set<EntityId> firsts;
    for_each_linked(graph, s, config.sensitive_relation, [&](EntityId b) {
      if (!search.is_endpoint(b)) firsts.insert(b);
    });
    for (EntityId b : firsts) {
      std::vector<std::uint32_t> seq{s.value, b.value};
      search.extend(seq);
    }
  }
  std::sort(search.found.begin(), search.found.end());
  search.found.erase(std::unique(search.found.begin(), search.found.end()), search.found.end());

  std::vector<BiasedPath> paths;
  paths.reserve(search.found.size());
  for (const auto& seq : search.found) {
    BiasedPath p;
    p.sensitive = EntityId{seq.front()};
    p.sensitive_relation = config.sensitive_relation;
    for (std::size_t i = 1; i + 1 < seq.size(); ++i) p.bridge.push_back(EntityId{seq[i]});
    p.nonsensitive_relation = config.nonsensitive_relation;
    p.nonsensitive = EntityId{seq.back()};
    paths.push_back(std::move(p));
  }
  return paths;
}

bool path_exists(const KnowledgeGraph& graph, const BiasedPath& path) {
  if (path.bridge.empty()) return false;
  if (!graph.linked(path.sensitive, path.sensitive_relation, path.bridge.front())) return false;
  for (std::size_t i = 0; i + 1 < path.bridge.size(); ++i) {
    const EntityId a = path.bridge[i];
    const EntityId b = path.bridge[i + 1];
    bool any = false;
    for (const Neighbor& n : graph.out_edges(a)) any = any || n.entity == b;
    for (const Neighbor& n : graph.in_edges(a)) any = any || n.entity == b;
    if (!any) return false;
  }
  return graph.linked(path.bridge.back(), path.nonsensitive_relation, path.nonsensitive);
}

double two_hop_connectivity(const KnowledgeGraph& graph, EntityId c_j, EntityId s_i,
                            const SensitiveConfig& config) {
  if (!config.is_nonsensitive(c_j)) throw Error("two_hop_connectivity: entity is not in the non-sensitive set");
  if (!config.is_sensitive(s_i)) throw Error("two_hop_connectivity: entity is not in the sensitive set");
  std::set<EntityId> bridges;
  for_each_linked(graph, c_j, config.nonsensitive_relation, [&](EntityId b) {
    if (!config.is_sensitive(b) && !config.is_nonsensitive(b)) bridges.insert(b);
  });
  if (bridges.empty()) return 0.0;
  std::size_t hits = 0;
  for (EntityId b : bridges) hits += graph.linked(b, config.sensitive_relation, s_i) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(bridges.size());
}

// ---------------------------------------------------------------------------

namespace {

// Largest-remainder split of `n` items by non-negative weights.
std::vector<std::size_t> apportion(std::size_t n, const std::vector<double>& weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> out(weights.size(), 0);
  if (n == 0 || total <= 0.0) return out;
  std::vector<std::pair<double, std::size_t>> rema;
  std::size_t used = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double exact = static_cast<double>(n) * weights[j] / total;
    out[j] = static_cast<std::size_t>(std::floor(exact));
    used += out[j];
    rema.emplace_back(exact - std::floor(exact), j);
  }
  std::stable_sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; used < n; ++k, ++used) ++out[rema[k % rema.size()].second];
  return out;
}

std::string padded(const char* prefix, std::size_t i, std::size_t n) {
  const std::size_t width = std::to_string(n > 0 ? n - 1 : 0).size();
  std::string num = std::to_string(i);
  return prefix + std::string(width - std::min(width, num.size()), '0') + num;
}

}  // namespace

SynthGraph synth_biased_kg(std::size_t n_bridges, double bias_ratio, std::size_t n_nonsensitive,
                           std::uint64_t seed, SynthOptions options) {
  if (n_bridges < 2) throw Error("synth_biased_kg: need at least two bridges");
  if (!(bias_ratio >= 0.0 && bias_ratio <= 1.0)) throw Error("synth_biased_kg: bias_ratio outside [0, 1]");
  if (n_nonsensitive < 1) throw Error("synth_biased_kg: need at least one non-sensitive entity");

  GraphBuilder b;
  const EntityId male = b.add_entity("male");
  const EntityId female = b.add_entity("female");
  std::vector<EntityId> occupations;
  for (std::size_t j = 0; j < n_nonsensitive; ++j) {
    occupations.push_back(b.add_entity(padded("occupation_", j, n_nonsensitive)));
  }
  std::vector<EntityId> people;
  for (std::size_t i = 0; i < n_bridges; ++i) people.push_back(b.add_entity(padded("person_", i, n_bridges)));
  const RelationId has_gender = b.add_relation("has_gender");
  const RelationId has_occupation = b.add_relation("has_occupation");

  std::mt19937_64 rng(seed);
  const auto n_male = static_cast<std::size_t>(std::llround(bias_ratio * static_cast<double>(n_bridges)));
  std::vector<std::size_t> order(n_bridges);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<EntityId> gender(n_bridges, female);
  for (std::size_t k = 0; k < n_male; ++k) gender[order[k]] = male;

  // Occupation quotas per gender: weights 1 +/- coupling * a_j, a_j spread
  // evenly over [-1, 1], so occupation 0 leans female and the last leans male.
  std::vector<double> w_male(n_nonsensitive, 1.0), w_female(n_nonsensitive, 1.0);
  if (n_nonsensitive > 1) {
    for (std::size_t j = 0; j < n_nonsensitive; ++j) {
      const double a = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n_nonsensitive - 1);
      w_male[j] = std::max(0.0, 1.0 + options.coupling * a);
      w_female[j] = std::max(0.0, 1.0 - options.coupling * a);
    }
  }
  std::vector<EntityId> occupation(n_bridges, occupations[0]);
  for (const auto& [g, weights] : {std::pair{male, &w_male}, std::pair{female, &w_female}}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n_bridges; ++i) {
      if (gender[i] == g) members.push_back(i);
    }
    const auto quota = apportion(members.size(), *weights);
    std::shuffle(members.begin(), members.end(), rng);
    std::size_t pos = 0;
    for (std::size_t j = 0; j < quota.size(); ++j) {
      for (std::size_t k = 0; k < quota[j]; ++k) occupation[members[pos++]] = occupations[j];
    }
  }

  for (std::size_t i = 0; i < n_bridges; ++i) {
    b.add(people[i], has_gender, gender[i]);
    b.add(people[i], has_occupation, occupation[i]);
  }

  SynthGraph out{std::move(b).build(), {}};
  out.config.sensitive = {male, female};
  out.config.sensitive_relation = has_gender;
  out.config.nonsensitive = occupations;
  out.config.nonsensitive_relation = has_occupation;
  return out;
}

}  // namespace fairkg
