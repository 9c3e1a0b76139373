#pragma once

// Ranking and group-fairness metrics, and repeated train/evaluate runs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairkg/graph.hpp"
#include "fairkg/models.hpp"
#include "fairkg/train.hpp"

namespace fairkg {

/// Rank of a true candidate scoring `target` against `others`: one plus the
/// number strictly above plus half the number tied.
double mean_tie_rank(double target, std::span<const double> others);

/// Mean reciprocal rank over both corruption directions. Candidates forming a
/// triple of `graph` (other than the one being ranked) are removed. Throws
/// Error on an empty `triples`.
double filtered_mrr(const Representations& reps, std::span<const Triple> triples, const KnowledgeGraph& graph);
/// Same without removing known triples.
double raw_mrr(const Representations& reps, std::span<const Triple> triples, std::size_t num_entities);

enum class FairnessTest { test1, test2 };

/// Which bridges answer test-1 queries.
enum class Test1Scope { all_bridges, test_bridges };

/// One prediction query: an entity with a known sensitive value, asked for its
/// non-sensitive entity over r_c.
struct FairnessInstance {
  EntityId query;
  std::size_t group = 0;  // position in SensitiveConfig::sensitive
  EntityId label;         // true c_j
};

/// Test 1: every bridge with an r_c triple to C and a sensitive value (or only
/// those appearing in `test_triples` under Test1Scope::test_bridges).
/// Test 2: r_c triples of `test_triples` with one endpoint in C whose other
/// endpoint has a sensitive value.
std::vector<FairnessInstance> fairness_instances(const KnowledgeGraph& graph, const SensitiveConfig& config,
                                                 FairnessTest test, std::span<const Triple> test_triples,
                                                 Test1Scope scope = Test1Scope::all_bridges);

/// Probability mass the top-1 prediction over C puts on each c in C; tied
/// leaders share the mass equally. Indexed like SensitiveConfig::nonsensitive.
std::vector<double> top1_distribution(const Representations& reps, const SensitiveConfig& config, EntityId query);

struct FairnessResult {
  double sp = 0.0;
  double eo = 0.0;
  /// (c_j, pair) terms averaged, and terms skipped for an empty group.
  std::size_t sp_terms = 0, sp_skipped = 0;
  std::size_t eo_terms = 0, eo_skipped = 0;
};

/// Average statistical parity and equal opportunity over every c_j in C and
/// sensitive pair. Throws ConfigError when |S| < 2.
FairnessResult fairness_eval(const Representations& reps, const SensitiveConfig& config,
                             std::span<const FairnessInstance> instances);
FairnessResult fairness_eval(const Representations& reps, const KnowledgeGraph& graph, const SensitiveConfig& config,
                             FairnessTest test, std::span<const Triple> test_triples,
                             Test1Scope scope = Test1Scope::all_bridges);

struct SeedMetrics {
  std::uint64_t seed = 0;
  double mrr = 0.0;
  double sp_test1 = 0.0;
  double eo_test1 = 0.0;
  double sp_test2 = 0.0;
  double eo_test2 = 0.0;
  std::size_t epochs = 0;
  std::optional<std::string> error;
};

struct EvalReport {
  double mrr = 0.0;
  double sp_test1 = 0.0;
  double eo_test1 = 0.0;
  double sp_test2 = 0.0;
  double eo_test2 = 0.0;
  std::vector<SeedMetrics> per_seed;
  std::string config_digest;
  /// False when a repetition failed; means cover the successful ones.
  bool complete = true;

  /// Recomputes the means from `per_seed`.
  void aggregate();
  /// Keys sorted, numbers rounded to 6 significant digits.
  std::string to_json() const;
};

/// All metrics of one trained model on its test split.
SeedMetrics evaluate_run(const ModelState& state, const KnowledgeGraph& graph, const SplitSet& splits,
                         const SensitiveConfig& config, Test1Scope scope = Test1Scope::all_bridges);

struct RunSpec {
  const KnowledgeGraph* graph = nullptr;
  SensitiveConfig sensitive;
  TrainConfig train;
  SplitRatios ratios;
  /// When set, every repetition reuses this split; otherwise repetition i
  /// splits with seed + i.
  std::optional<SplitSet> fixed_splits;
  Test1Scope test1_scope = Test1Scope::all_bridges;
};

/// Trains and evaluates with seeds seed .. seed + n - 1. A failing repetition
/// is recorded in its SeedMetrics and marks the report incomplete.
EvalReport repeat_and_aggregate(const RunSpec& spec, std::size_t n);

}  // namespace fairkg
