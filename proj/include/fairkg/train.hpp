#pragma once

// Link-prediction training with negative sampling, the optional Fair Ratio
// regulariser and early stopping on validation filtered MRR.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "fairkg/autodiff.hpp"
#include "fairkg/fairness.hpp"
#include "fairkg/graph.hpp"
#include "fairkg/models.hpp"

namespace fairkg {

struct TrainConfig {
  double learning_rate = 0.005;
  double weight_decay = 0.005;
  std::size_t max_epochs = 100;
  /// Epochs without a strict validation-MRR improvement before stopping.
  std::size_t patience = 10;
  std::size_t negative_ratio = 10;
  std::size_t batch_size = 512;
  std::uint64_t seed = 0;
  std::size_t repetitions = 5;
  /// Hop limit for the biased paths feeding the SBM term.
  int max_hops = 2;
  FairLossConfig fair;
  ModelConfig model;

  /// Throws ConfigError on an out-of-range field.
  void validate() const;
};

/// `ratio` corruptions of `triple`, each replacing the head or the tail (fair
/// coin) with a uniform entity, never producing a triple of `graph`. Throws
/// Error when no legal corruption turns up within a bounded number of draws.
std::vector<Triple> negative_sample(const Triple& triple, const KnowledgeGraph& graph, std::size_t ratio,
                                    std::mt19937_64& rng);

/// Mean binary cross-entropy of sigmoid(DistMult) with label 1 for
/// `positives` and 0 for `negatives`.
Var task_loss(Var entities, Var relations, std::span<const Triple> positives, std::span<const Triple> negatives);

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double l0 = 0.0;        // mean over batches
  double lfr = 0.0;       // mean over batches; 0 when the term is inactive
  double loss = 0.0;      // mean joint loss
  double valid_mrr = 0.0;
};

struct TrainResult {
  /// Parameters of the epoch with the best validation MRR.
  ModelState state;
  std::vector<EpochStats> history;
  std::size_t best_epoch = 0;
};

/// Trains on `splits.train`, message passing over the training triples.
/// `sensitive` may be null only when the Fair Ratio term is inactive. Fully
/// deterministic in `seed`. Throws NumericError on a non-finite loss.
TrainResult train(const KnowledgeGraph& graph, const SplitSet& splits, const SensitiveConfig* sensitive,
                  const TrainConfig& config, std::uint64_t seed);

}  // namespace fairkg
