#include "fairkg/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "fairkg/error.hpp"
#include "fairkg/report.hpp"

namespace fairkg {

std::string_view to_string(FairMode mode) {
  switch (mode) {
    case FairMode::baseline: return "baseline";
    case FairMode::sbm_only: return "sbm_only";
    case FairMode::sbm_erp: return "sbm_erp";
  }
  return "baseline";
}

FairMode parse_fair_mode(std::string_view text) {
  if (text == "baseline") return FairMode::baseline;
  if (text == "sbm_only" || text == "sbm") return FairMode::sbm_only;
  if (text == "sbm_erp" || text == "sbm+erp") return FairMode::sbm_erp;
  throw ConfigError("unknown fairness mode '" + std::string(text) + "' (expected baseline, sbm_only or sbm_erp)");
}

void FairLossConfig::validate() const {
  if (norm_order < 1) throw ConfigError("norm order k must be at least 1");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("mu must be a finite non-negative number");
}

Tensor phi(const Tensor& h_c, const Tensor& h_rc, const Tensor& h_rs, const Tensor& h_s) {
  return hadamard(hadamard(hadamard(h_c, h_rc), h_rs), h_s);
}

Var phi(Var h_c, Var h_rc, Var h_rs, Var h_s) { return hadamard(hadamard(hadamard(h_c, h_rc), h_rs), h_s); }

double inclination_score(std::span<const double> phi_a, std::span<const double> phi_b, int k) {
  if (phi_a.size() != phi_b.size()) throw ShapeError("inclination_score: dimension mismatch");
  return std::abs(p_norm(phi_a, k) - p_norm(phi_b, k));
}

double inclination_upper_bound(std::span<const double> phi_a, std::span<const double> phi_b, int k) {
  if (phi_a.size() != phi_b.size()) throw ShapeError("inclination_upper_bound: dimension mismatch");
  std::vector<double> diff(phi_a.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = phi_a[i] - phi_b[i];
  return p_norm(diff, k);
}

std::vector<FairTerm> fairness_terms(std::span<const BiasedPath> paths, const SensitiveConfig& config) {
  std::set<EntityId> endpoints;
  for (const BiasedPath& p : paths) endpoints.insert(p.nonsensitive);
  std::vector<FairTerm> terms;
  const std::size_t q = config.sensitive.size();
  for (EntityId c : endpoints) {
    for (std::size_t a = 0; a < q; ++a) {
      for (std::size_t b = a + 1; b < q; ++b) terms.push_back({c, a, b});
    }
  }
  return terms;
}

std::vector<FairTerm> sample_terms(std::span<const FairTerm> terms, std::size_t budget, std::mt19937_64& rng) {
  if (budget == 0 || budget >= terms.size()) return {terms.begin(), terms.end()};
  std::vector<std::size_t> order(terms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(budget);
  std::sort(order.begin(), order.end());
  std::vector<FairTerm> out;
  out.reserve(budget);
  for (std::size_t i : order) out.push_back(terms[i]);
  return out;
}

namespace {

void require_pairs(const SensitiveConfig& config, const char* op) {
  if (config.sensitive.size() < 2) {
    throw ConfigError(std::string(op) + ": need at least two sensitive entities");
  }
}

Var scalar_zero(Tape& tape) { return tape.constant(Tensor::scalar(0.0)); }

}  // namespace

Var sbm_loss(Var entities, Var relations, const SensitiveConfig& config, std::span<const FairTerm> terms, int k,
             double term_scale) {
  require_pairs(config, "sbm_loss");
  Tape& tape = entities.tape();
  Var inner;
  if (terms.empty()) {
    inner = scalar_zero(tape);
  } else {
    std::vector<std::uint32_t> c_rows, a_rows, b_rows;
    for (const FairTerm& t : terms) {
      if (t.a >= config.sensitive.size() || t.b >= config.sensitive.size()) {
        throw Error("sbm_loss: sensitive position out of range");
      }
      c_rows.push_back(t.nonsensitive.value);
      a_rows.push_back(config.sensitive[t.a].value);
      b_rows.push_back(config.sensitive[t.b].value);
    }
    const std::vector<std::uint32_t> rc_rows(terms.size(), config.nonsensitive_relation.value);
    const std::vector<std::uint32_t> rs_rows(terms.size(), config.sensitive_relation.value);
    // c * r_c * r_s is shared by both sides of every term.
    Var common = hadamard(hadamard(gather_rows(entities, c_rows), gather_rows(relations, rc_rows)),
                          gather_rows(relations, rs_rows));
    Var diff = sub(hadamard(common, gather_rows(entities, a_rows)), hadamard(common, gather_rows(entities, b_rows)));
    inner = sum(row_p_norm(diff, k));
  }
  return log_sigmoid(scale(inner, term_scale / static_cast<double>(config.pair_count())));
}

Var erp_loss(Var entities, const SensitiveConfig& config, int k) {
  require_pairs(config, "erp_loss");
  std::vector<std::uint32_t> a_rows, b_rows;
  const std::size_t q = config.sensitive.size();
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = a + 1; b < q; ++b) {
      a_rows.push_back(config.sensitive[a].value);
      b_rows.push_back(config.sensitive[b].value);
    }
  }
  Var inner = sum(row_p_norm(sub(gather_rows(entities, a_rows), gather_rows(entities, b_rows)), k));
  return log_sigmoid(scale(inner, 1.0 / static_cast<double>(config.pair_count())));
}

Var fair_ratio_loss(Var entities, Var relations, const SensitiveConfig& config, std::span<const FairTerm> terms,
                    const FairLossConfig& fair, double term_scale) {
  Var sbm = sbm_loss(entities, relations, config, terms, fair.norm_order, term_scale);
  switch (fair.mode) {
    case FairMode::sbm_only: return sbm;
    case FairMode::sbm_erp: return sub(sbm, erp_loss(entities, config, fair.norm_order));
    case FairMode::baseline: break;
  }
  throw Error("fair_ratio_loss: baseline mode has no Fair Ratio term");
}

Var joint_loss(Var l0, Var lfr, double mu) { return add(l0, scale(lfr, mu)); }

double joint_loss(double l0, double lfr, double mu) { return l0 + mu * lfr; }

// ---------------------------------------------------------------------------

double InclinationReport::mean_is() const {
  if (rows.empty()) return 0.0;
  double acc = 0.0;
  for (const InclinationRow& r : rows) acc += r.is;
  return acc / static_cast<double>(rows.size());
}

InclinationReport audit_inclinations(const SensitiveConfig& config, const Representations& reps, int k) {
  require_pairs(config, "audit_inclinations");
  if (k < 1) throw ConfigError("norm order k must be at least 1");
  InclinationReport report;
  report.norm_order = k;
  auto row_of = [](const Tensor& table, std::uint32_t r) {
    auto values = table.row(r);
    return Tensor::vector(std::vector<double>(values.begin(), values.end()));
  };
  const Tensor h_rc = row_of(reps.relations, config.nonsensitive_relation.value);
  const Tensor h_rs = row_of(reps.relations, config.sensitive_relation.value);
  auto entity_row = [&](EntityId e) { return row_of(reps.entities, e.value); };
  const std::size_t q = config.sensitive.size();
  for (EntityId c : config.nonsensitive) {
    const Tensor common = hadamard(hadamard(entity_row(c), h_rc), h_rs);
    std::vector<Tensor> phis;
    for (EntityId s : config.sensitive) phis.push_back(hadamard(common, entity_row(s)));
    for (std::size_t a = 0; a < q; ++a) {
      for (std::size_t b = a + 1; b < q; ++b) {
        InclinationRow row;
        row.nonsensitive = c;
        row.sensitive_a = config.sensitive[a];
        row.sensitive_b = config.sensitive[b];
        row.phi_norm_a = p_norm(phis[a].values(), k);
        row.phi_norm_b = p_norm(phis[b].values(), k);
        row.is = std::abs(row.phi_norm_a - row.phi_norm_b);
        row.upper_bound = inclination_upper_bound(phis[a].values(), phis[b].values(), k);
        report.rows.push_back(row);
      }
    }
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const InclinationRow& x, const InclinationRow& y) { return x.is > y.is; });
  return report;
}

InclinationReport audit_inclinations(const KnowledgeGraph& graph, const SensitiveConfig& config,
                                     const ModelState& state, int k) {
  const MessageGraph mg = MessageGraph::build(graph.num_entities(), graph.num_relations(), graph.triples());
  return audit_inclinations(config, encode_eval(mg, state), k);
}

void write_inclination_csv(std::ostream& out, const KnowledgeGraph& graph, const InclinationReport& report) {
  out << "nonsensitive_label,sensitive_a,sensitive_b,phi_norm_a,phi_norm_b,is,upper_bound\n";
  for (const InclinationRow& r : report.rows) {
    out << graph.entity_label(r.nonsensitive) << ',' << graph.entity_label(r.sensitive_a) << ','
        << graph.entity_label(r.sensitive_b) << ',' << format_number(r.phi_norm_a) << ','
        << format_number(r.phi_norm_b) << ',' << format_number(r.is) << ',' << format_number(r.upper_bound) << '\n';
  }
}

}  // namespace fairkg
