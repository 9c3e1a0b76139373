#include "fairkg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "fairkg/config.hpp"
#include "fairkg/error.hpp"
#include "fairkg/report.hpp"

namespace fairkg {

double mean_tie_rank(double target, std::span<const double> others) {
  double greater = 0.0, ties = 0.0;
  for (double s : others) {
    if (s > target) {
      greater += 1.0;
    } else if (s == target) {
      ties += 1.0;
    }
  }
  return 1.0 + greater + ties / 2.0;
}

namespace {

// Scores of (fixed, r, e) for every entity e; DistMult is symmetric, so the
// same vector ranks heads and tails.
std::vector<double> score_all(const Representations& reps, EntityId fixed, RelationId r) {
  const std::size_t d = reps.entities.cols();
  std::vector<double> query(d);
  auto h = reps.entities.row(fixed.value);
  auto rel = reps.relations.row(r.value);
  for (std::size_t k = 0; k < d; ++k) query[k] = h[k] * rel[k];
  std::vector<double> scores(reps.entities.rows());
  for (std::size_t e = 0; e < scores.size(); ++e) {
    auto row = reps.entities.row(e);
    double acc = 0.0;
    for (std::size_t k = 0; k < d; ++k) acc += query[k] * row[k];
    scores[e] = acc;
  }
  return scores;
}

double reciprocal_ranks(const Representations& reps, std::span<const Triple> triples, const KnowledgeGraph* filter,
                        std::size_t num_entities) {
  if (triples.empty()) throw Error("MRR needs at least one evaluation triple");
  if (reps.entities.rows() != num_entities) throw ShapeError("MRR: representation rows differ from the entity count");
  double total = 0.0;
  std::vector<double> others;
  others.reserve(num_entities);
  for (const Triple& t : triples) {
    for (int direction = 0; direction < 2; ++direction) {
      const bool tail_side = direction == 0;
      const EntityId fixed = tail_side ? t.head : t.tail;
      const EntityId truth = tail_side ? t.tail : t.head;
      const std::vector<double> scores = score_all(reps, fixed, t.relation);
      others.clear();
      for (std::uint32_t e = 0; e < num_entities; ++e) {
        if (e == truth.value) continue;
        if (filter != nullptr) {
          const Triple candidate =
              tail_side ? Triple{t.head, t.relation, EntityId{e}} : Triple{EntityId{e}, t.relation, t.tail};
          if (filter->contains(candidate)) continue;
        }
        others.push_back(scores[e]);
      }
      total += 1.0 / mean_tie_rank(scores[truth.value], others);
    }
  }
  return total / (2.0 * static_cast<double>(triples.size()));
}

}  // namespace

double filtered_mrr(const Representations& reps, std::span<const Triple> triples, const KnowledgeGraph& graph) {
  return reciprocal_ranks(reps, triples, &graph, graph.num_entities());
}

double raw_mrr(const Representations& reps, std::span<const Triple> triples, std::size_t num_entities) {
  return reciprocal_ranks(reps, triples, nullptr, num_entities);
}

// ---------------------------------------------------------------------------

namespace {

std::optional<std::size_t> group_of(const KnowledgeGraph& graph, const SensitiveConfig& config, EntityId e) {
  const auto s = sensitive_value_of(graph, config, e);
  if (!s) return std::nullopt;
  const auto it = std::find(config.sensitive.begin(), config.sensitive.end(), *s);
  return static_cast<std::size_t>(it - config.sensitive.begin());
}

std::optional<EntityId> first_nonsensitive_neighbor(const KnowledgeGraph& graph, const SensitiveConfig& config,
                                                    EntityId e) {
  for (const Neighbor& n : graph.out_edges(e)) {
    if (n.relation == config.nonsensitive_relation && config.is_nonsensitive(n.entity)) return n.entity;
  }
  for (const Neighbor& n : graph.in_edges(e)) {
    if (n.relation == config.nonsensitive_relation && config.is_nonsensitive(n.entity)) return n.entity;
  }
  return std::nullopt;
}

}  // namespace

std::vector<FairnessInstance> fairness_instances(const KnowledgeGraph& graph, const SensitiveConfig& config,
                                                 FairnessTest test, std::span<const Triple> test_triples,
                                                 Test1Scope scope) {
  std::vector<FairnessInstance> out;
  if (test == FairnessTest::test1) {
    std::vector<bool> in_test(graph.num_entities(), scope == Test1Scope::all_bridges);
    if (scope == Test1Scope::test_bridges) {
      for (const Triple& t : test_triples) {
        in_test[t.head.value] = true;
        in_test[t.tail.value] = true;
      }
    }
    for (std::uint32_t i = 0; i < graph.num_entities(); ++i) {
      const EntityId e{i};
      if (!in_test[i] || config.is_sensitive(e) || config.is_nonsensitive(e)) continue;
      const auto label = first_nonsensitive_neighbor(graph, config, e);
      if (!label) continue;
      const auto group = group_of(graph, config, e);
      if (!group) continue;
      out.push_back({e, *group, *label});
    }
    return out;
  }
  for (const Triple& t : test_triples) {
    if (t.relation != config.nonsensitive_relation) continue;
    EntityId query, label;
    if (config.is_nonsensitive(t.tail) && !config.is_nonsensitive(t.head)) {
      query = t.head;
      label = t.tail;
    } else if (config.is_nonsensitive(t.head) && !config.is_nonsensitive(t.tail)) {
      query = t.tail;
      label = t.head;
    } else {
      continue;
    }
    if (config.is_sensitive(query)) continue;
    const auto group = group_of(graph, config, query);
    if (!group) continue;
    out.push_back({query, *group, label});
  }
  return out;
}

std::vector<double> top1_distribution(const Representations& reps, const SensitiveConfig& config, EntityId query) {
  const std::size_t d = reps.entities.cols();
  auto h = reps.entities.row(query.value);
  auto rel = reps.relations.row(config.nonsensitive_relation.value);
  std::vector<double> scores(config.nonsensitive.size());
  for (std::size_t j = 0; j < scores.size(); ++j) {
    auto c = reps.entities.row(config.nonsensitive[j].value);
    double acc = 0.0;
    for (std::size_t k = 0; k < d; ++k) acc += h[k] * rel[k] * c[k];
    scores[j] = acc;
  }
  const double best = *std::max_element(scores.begin(), scores.end());
  const double leaders = static_cast<double>(std::count(scores.begin(), scores.end(), best));
  std::vector<double> dist(scores.size(), 0.0);
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (scores[j] == best) dist[j] = 1.0 / leaders;
  }
  return dist;
}

FairnessResult fairness_eval(const Representations& reps, const SensitiveConfig& config,
                             std::span<const FairnessInstance> instances) {
  const std::size_t q = config.sensitive.size();
  if (q < 2) throw ConfigError("fairness_eval: need at least two sensitive entities");
  const std::size_t p = config.nonsensitive.size();
  // Instances whose top-1 set contains c_j are counted by the size of that
  // set, so the probability is sum_k (n_k / N) / k with exact integer n_k.
  using TieCounts = std::map<std::size_t, double>;
  std::vector<std::vector<TieCounts>> hits(q, std::vector<TieCounts>(p));
  std::vector<std::vector<TieCounts>> eo_hits(q, std::vector<TieCounts>(p));
  std::vector<double> count(q, 0.0);
  std::vector<std::vector<double>> eo_count(q, std::vector<double>(p, 0.0));
  for (const FairnessInstance& inst : instances) {
    if (inst.group >= q) throw Error("fairness_eval: instance group out of range");
    const std::vector<double> dist = top1_distribution(reps, config, inst.query);
    const auto leaders = static_cast<std::size_t>(std::count_if(dist.begin(), dist.end(), [](double m) { return m > 0; }));
    const auto label_it = std::find(config.nonsensitive.begin(), config.nonsensitive.end(), inst.label);
    const std::size_t label = static_cast<std::size_t>(label_it - config.nonsensitive.begin());
    count[inst.group] += 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      if (dist[j] > 0) hits[inst.group][j][leaders] += 1.0;
    }
    if (label < p) {
      eo_count[inst.group][label] += 1.0;
      if (dist[label] > 0) eo_hits[inst.group][label][leaders] += 1.0;
    }
  }
  auto rate = [](const TieCounts& tc, double n) {
    double r = 0.0;
    for (const auto& [k, hit] : tc) r += hit / n / static_cast<double>(k);
    return r;
  };

  FairnessResult r;
  double sp_sum = 0.0, eo_sum = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t a = 0; a < q; ++a) {
      for (std::size_t b = a + 1; b < q; ++b) {
        if (count[a] > 0.0 && count[b] > 0.0) {
          sp_sum += std::abs(rate(hits[a][j], count[a]) - rate(hits[b][j], count[b]));
          ++r.sp_terms;
        } else {
          ++r.sp_skipped;
        }
        if (eo_count[a][j] > 0.0 && eo_count[b][j] > 0.0) {
          eo_sum += std::abs(rate(eo_hits[a][j], eo_count[a][j]) - rate(eo_hits[b][j], eo_count[b][j]));
          ++r.eo_terms;
        } else {
          ++r.eo_skipped;
        }
      }
    }
  }
  r.sp = r.sp_terms > 0 ? sp_sum / static_cast<double>(r.sp_terms) : 0.0;
  r.eo = r.eo_terms > 0 ? eo_sum / static_cast<double>(r.eo_terms) : 0.0;
  return r;
}

FairnessResult fairness_eval(const Representations& reps, const KnowledgeGraph& graph, const SensitiveConfig& config,
                             FairnessTest test, std::span<const Triple> test_triples, Test1Scope scope) {
  const auto instances = fairness_instances(graph, config, test, test_triples, scope);
  return fairness_eval(reps, config, instances);
}

// ---------------------------------------------------------------------------

void EvalReport::aggregate() {
  mrr = sp_test1 = eo_test1 = sp_test2 = eo_test2 = 0.0;
  double n = 0.0;
  complete = true;
  for (const SeedMetrics& m : per_seed) {
    if (m.error) {
      complete = false;
      continue;
    }
    mrr += m.mrr;
    sp_test1 += m.sp_test1;
    eo_test1 += m.eo_test1;
    sp_test2 += m.sp_test2;
    eo_test2 += m.eo_test2;
    n += 1.0;
  }
  if (per_seed.empty()) complete = false;
  if (n > 0.0) {
    mrr /= n;
    sp_test1 /= n;
    eo_test1 /= n;
    sp_test2 /= n;
    eo_test2 /= n;
  }
}

std::string EvalReport::to_json() const {
  using nlohmann::json;
  json seeds = json::array();
  for (const SeedMetrics& m : per_seed) {
    json row = {{"seed", m.seed},
                {"mrr", round6(m.mrr)},
                {"sp_test1", round6(m.sp_test1)},
                {"eo_test1", round6(m.eo_test1)},
                {"sp_test2", round6(m.sp_test2)},
                {"eo_test2", round6(m.eo_test2)},
                {"epochs", m.epochs}};
    if (m.error) row["error"] = *m.error;
    seeds.push_back(std::move(row));
  }
  json doc = {{"mrr", round6(mrr)},
              {"sp_test1", round6(sp_test1)},
              {"eo_test1", round6(eo_test1)},
              {"sp_test2", round6(sp_test2)},
              {"eo_test2", round6(eo_test2)},
              {"per_seed", seeds},
              {"config_digest", config_digest},
              {"complete", complete}};
  return doc.dump(2) + "\n";
}

SeedMetrics evaluate_run(const ModelState& state, const KnowledgeGraph& graph, const SplitSet& splits,
                         const SensitiveConfig& config, Test1Scope scope) {
  const MessageGraph mg = MessageGraph::build(graph.num_entities(), graph.num_relations(), splits.train);
  const Representations reps = encode_eval(mg, state);
  SeedMetrics m;
  m.mrr = filtered_mrr(reps, splits.test, graph);
  const FairnessResult t1 = fairness_eval(reps, graph, config, FairnessTest::test1, splits.test, scope);
  const FairnessResult t2 = fairness_eval(reps, graph, config, FairnessTest::test2, splits.test, scope);
  m.sp_test1 = t1.sp;
  m.eo_test1 = t1.eo;
  m.sp_test2 = t2.sp;
  m.eo_test2 = t2.eo;
  return m;
}

EvalReport repeat_and_aggregate(const RunSpec& spec, std::size_t n) {
  if (n < 1) throw ConfigError("repetitions must be at least 1");
  if (spec.graph == nullptr) throw Error("repeat_and_aggregate: no graph");
  EvalReport report;
  report.config_digest = config_digest(spec.train, spec.ratios, spec.test1_scope);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t seed = spec.train.seed + i;
    SeedMetrics m;
    try {
      const SplitSet splits =
          spec.fixed_splits ? *spec.fixed_splits : split(*spec.graph, spec.ratios, &spec.sensitive, seed);
      const TrainResult trained = train(*spec.graph, splits, &spec.sensitive, spec.train, seed);
      m = evaluate_run(trained.state, *spec.graph, splits, spec.sensitive, spec.test1_scope);
      m.epochs = trained.history.size();
    } catch (const Error& e) {
      m = SeedMetrics{};
      m.error = e.what();
    }
    m.seed = seed;
    report.per_seed.push_back(std::move(m));
  }
  report.aggregate();
  return report;
}

}  // namespace fairkg
