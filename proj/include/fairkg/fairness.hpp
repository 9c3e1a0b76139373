#pragma once

// Fairness regularisation: the measurable function phi, inclination scores,
// and the SBM / ERP / Fair Ratio losses built on them.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairkg/autodiff.hpp"
#include "fairkg/graph.hpp"
#include "fairkg/models.hpp"
#include "fairkg/tensor.hpp"

namespace fairkg {

enum class FairMode { baseline, sbm_only, sbm_erp };

std::string_view to_string(FairMode mode);
FairMode parse_fair_mode(std::string_view text);

struct FairLossConfig {
  int norm_order = 2;
  double mu = 0.7;
  FairMode mode = FairMode::sbm_erp;
  /// (c_j, sensitive pair) terms drawn per step; 0 uses every term.
  std::size_t pair_budget = 0;

  /// Throws ConfigError when k < 1 or mu < 0.
  void validate() const;
  /// True when the Fair Ratio term takes part in the joint loss.
  bool active() const { return mode != FairMode::baseline && mu != 0.0; }
};

/// h_c * h_rc * h_rs * h_s, elementwise.
Tensor phi(const Tensor& h_c, const Tensor& h_rc, const Tensor& h_rs, const Tensor& h_s);
Var phi(Var h_c, Var h_rc, Var h_rs, Var h_s);

/// | ||phi_a||_k - ||phi_b||_k |.
double inclination_score(std::span<const double> phi_a, std::span<const double> phi_b, int k);
/// ||phi_a - phi_b||_k, the Minkowski bound on the inclination score.
double inclination_upper_bound(std::span<const double> phi_a, std::span<const double> phi_b, int k);

/// One summand of the SBM objective: a non-sensitive entity and a pair of
/// positions into SensitiveConfig::sensitive.
struct FairTerm {
  EntityId nonsensitive;
  std::size_t a = 0;
  std::size_t b = 0;
};

/// Distinct non-sensitive endpoints of `paths` crossed with every sensitive
/// pair, ordered by entity then pair.
std::vector<FairTerm> fairness_terms(std::span<const BiasedPath> paths, const SensitiveConfig& config);

/// Uniform sample of `budget` terms without replacement, in original order.
/// Returns all terms when `budget` is 0 or covers them.
std::vector<FairTerm> sample_terms(std::span<const FairTerm> terms, std::size_t budget, std::mt19937_64& rng);

/// ln sigma( term_scale / C(|S|,2) * sum_terms ||phi_a - phi_b||_k ), where
/// phi uses rows of the encoded `entities` and the relation rows r_c, r_s of
/// `relations`. `term_scale` rescales a sampled subset to the full sum.
/// Throws ConfigError when |S| < 2.
Var sbm_loss(Var entities, Var relations, const SensitiveConfig& config, std::span<const FairTerm> terms, int k,
             double term_scale = 1.0);

/// ln sigma( 1 / C(|S|,2) * sum_pairs ||h_a - h_b||_k ) over sensitive rows of
/// `entities`. Throws ConfigError when |S| < 2.
Var erp_loss(Var entities, const SensitiveConfig& config, int k);

/// sbm - erp in sbm_erp mode, sbm alone in sbm_only mode. Throws Error in
/// baseline mode, which has no Fair Ratio term.
Var fair_ratio_loss(Var entities, Var relations, const SensitiveConfig& config, std::span<const FairTerm> terms,
                    const FairLossConfig& fair, double term_scale = 1.0);

/// l0 + mu * lfr.
Var joint_loss(Var l0, Var lfr, double mu);
double joint_loss(double l0, double lfr, double mu);

// ---------------------------------------------------------------------------
// Inclination audit.

struct InclinationRow {
  EntityId nonsensitive;
  EntityId sensitive_a;
  EntityId sensitive_b;
  double phi_norm_a = 0.0;
  double phi_norm_b = 0.0;
  double is = 0.0;
  double upper_bound = 0.0;
};

struct InclinationReport {
  int norm_order = 2;
  /// Sorted by inclination score, largest first.
  std::vector<InclinationRow> rows;

  double mean_is() const;
};

/// One row per c_j in C and sensitive pair, computed from evaluated
/// representations.
InclinationReport audit_inclinations(const SensitiveConfig& config, const Representations& reps, int k);
/// Same, after an evaluation-mode encode of `state` over every triple of
/// `graph`.
InclinationReport audit_inclinations(const KnowledgeGraph& graph, const SensitiveConfig& config,
                                     const ModelState& state, int k);

/// CSV with header
/// nonsensitive_label,sensitive_a,sensitive_b,phi_norm_a,phi_norm_b,is,upper_bound
void write_inclination_csv(std::ostream& out, const KnowledgeGraph& graph, const InclinationReport& report);

}  // namespace fairkg
