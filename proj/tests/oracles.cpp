#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fairkg::testing {
namespace {

double score(const Representations& reps, std::uint32_t h, std::uint32_t r, std::uint32_t t) {
  double s = 0.0;
  for (std::size_t k = 0; k < reps.entities.cols(); ++k) {
    s += reps.entities.at(h, k) * reps.relations.at(r, k) * reps.entities.at(t, k);
  }
  return s;
}

bool known(std::span<const Triple> all, std::uint32_t h, std::uint32_t r, std::uint32_t t) {
  for (const Triple& x : all) {
    if (x.head.value == h && x.relation.value == r && x.tail.value == t) return true;
  }
  return false;
}

}  // namespace

double oracle_filtered_mrr(const Representations& reps, std::span<const Triple> test, const KnowledgeGraph& graph) {
  const auto all = graph.triples();
  double total = 0.0;
  for (const Triple& t : test) {
    const std::uint32_t h = t.head.value, r = t.relation.value, tl = t.tail.value;
    for (int direction = 0; direction < 2; ++direction) {
      const double target = score(reps, h, r, tl);
      double above = 0.0, ties = 0.0;
      for (std::uint32_t e = 0; e < graph.num_entities(); ++e) {
        const std::uint32_t ch = direction == 0 ? h : e;
        const std::uint32_t ct = direction == 0 ? e : tl;
        if (ch == h && ct == tl) continue;
        if (known(all, ch, r, ct)) continue;
        const double s = score(reps, ch, r, ct);
        if (s > target) above += 1.0;
        if (s == target) ties += 1.0;
      }
      total += 1.0 / (1.0 + above + ties / 2.0);
    }
  }
  return total / (2.0 * static_cast<double>(test.size()));
}

std::pair<double, double> oracle_fairness(const Representations& reps, const KnowledgeGraph& graph,
                                          const SensitiveConfig& config, FairnessTest kind,
                                          std::span<const Triple> test) {
  const auto all = graph.triples();
  auto in = [](const std::vector<EntityId>& v, std::uint32_t e) {
    return std::find(v.begin(), v.end(), EntityId{e}) != v.end();
  };
  auto group_of = [&](std::uint32_t e) -> std::optional<std::size_t> {
    for (std::size_t g = 0; g < config.sensitive.size(); ++g) {
      const std::uint32_t s = config.sensitive[g].value;
      if (known(all, e, config.sensitive_relation.value, s) || known(all, s, config.sensitive_relation.value, e)) {
        return g;
      }
    }
    return std::nullopt;
  };

  struct Instance {
    std::uint32_t query;
    std::size_t group;
    std::uint32_t label;
  };
  std::vector<Instance> instances;
  const std::uint32_t rc = config.nonsensitive_relation.value;
  if (kind == FairnessTest::test1) {
    for (std::uint32_t e = 0; e < graph.num_entities(); ++e) {
      if (in(config.sensitive, e) || in(config.nonsensitive, e)) continue;
      std::optional<std::uint32_t> label;
      for (const Triple& t : all) {
        if (!label && t.head.value == e && t.relation.value == rc && in(config.nonsensitive, t.tail.value)) {
          label = t.tail.value;
        }
      }
      for (const Triple& t : all) {
        if (!label && t.tail.value == e && t.relation.value == rc && in(config.nonsensitive, t.head.value)) {
          label = t.head.value;
        }
      }
      const auto g = group_of(e);
      if (label && g) instances.push_back({e, *g, *label});
    }
  } else {
    for (const Triple& t : test) {
      if (t.relation.value != rc) continue;
      const bool tail_c = in(config.nonsensitive, t.tail.value), head_c = in(config.nonsensitive, t.head.value);
      if (tail_c == head_c) continue;
      const std::uint32_t q = tail_c ? t.head.value : t.tail.value;
      if (in(config.sensitive, q)) continue;
      const auto g = group_of(q);
      if (g) instances.push_back({q, *g, tail_c ? t.tail.value : t.head.value});
    }
  }

  // P(yhat = c_j) per instance: 1/k when c_j is among k tied leaders.
  auto predicted = [&](std::uint32_t q, std::uint32_t c) {
    double best = -INFINITY;
    for (EntityId x : config.nonsensitive) best = std::max(best, score(reps, q, rc, x.value));
    double leaders = 0.0;
    for (EntityId x : config.nonsensitive) leaders += score(reps, q, rc, x.value) == best ? 1.0 : 0.0;
    return score(reps, q, rc, c) == best ? 1.0 / leaders : 0.0;
  };

  double sp = 0.0, eo = 0.0;
  int sp_n = 0, eo_n = 0;
  for (EntityId c : config.nonsensitive) {
    for (std::size_t a = 0; a < config.sensitive.size(); ++a) {
      for (std::size_t b = a + 1; b < config.sensitive.size(); ++b) {
        double pa = 0, na = 0, pb = 0, nb = 0, ea = 0, ma = 0, eb = 0, mb = 0;
        for (const Instance& i : instances) {
          const double p = predicted(i.query, c.value);
          const bool pos = i.label == c.value;
          if (i.group == a) {
            pa += p;
            na += 1;
            if (pos) {
              ea += p;
              ma += 1;
            }
          }
          if (i.group == b) {
            pb += p;
            nb += 1;
            if (pos) {
              eb += p;
              mb += 1;
            }
          }
        }
        if (na > 0 && nb > 0) {
          sp += std::abs(pa / na - pb / nb);
          ++sp_n;
        }
        if (ma > 0 && mb > 0) {
          eo += std::abs(ea / ma - eb / mb);
          ++eo_n;
        }
      }
    }
  }
  return {sp_n ? sp / sp_n : 0.0, eo_n ? eo / eo_n : 0.0};
}

SynthGraph random_fair_graph(std::uint64_t seed, std::size_t max_entities) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n_sensitive = 2 + seed % 2;
  const std::size_t n_jobs = 2 + seed % 3;
  const std::size_t n_people = std::min<std::size_t>(10 + seed * 3, max_entities - n_sensitive - n_jobs - 2);
  GraphBuilder b;
  std::vector<std::string> sens, jobs;
  for (std::size_t i = 0; i < n_sensitive; ++i) sens.push_back("s" + std::to_string(i));
  for (std::size_t i = 0; i < n_jobs; ++i) jobs.push_back("job" + std::to_string(i));
  for (const auto& s : sens) b.add_entity(s);
  for (const auto& j : jobs) b.add_entity(j);
  b.add_relation("gender");
  b.add_relation("job");
  for (std::size_t i = 0; i < n_people; ++i) {
    const std::string p = "p" + std::to_string(i);
    b.add_entity(p);
    if (u(rng) < 0.9) b.add(p, "gender", sens[rng() % n_sensitive]);
    if (u(rng) < 0.85) {
      const std::string& j = jobs[rng() % n_jobs];
      if (u(rng) < 0.2) {
        b.add(j, "job", p);
      } else {
        b.add(p, "job", j);
      }
      if (u(rng) < 0.1) b.add(p, "job", jobs[rng() % n_jobs]);
    }
  }
  b.add_entity("city");
  b.add_entity("club");
  for (std::size_t i = 0; i < n_people / 2; ++i) {
    b.add("p" + std::to_string(rng() % n_people), "lives_in", "city");
    b.add("p" + std::to_string(rng() % n_people), "knows", "p" + std::to_string(rng() % n_people));
    if (u(rng) < 0.3) b.add("p" + std::to_string(rng() % n_people), "member", "club");
  }
  KnowledgeGraph g = std::move(b).build();
  SensitiveLabels labels{sens, "gender", jobs, "job"};
  SensitiveConfig c = resolve_sensitive(g, labels);
  return {std::move(g), std::move(c)};
}

}  // namespace fairkg::testing
