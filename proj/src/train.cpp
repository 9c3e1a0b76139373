#include "fairkg/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fairkg/error.hpp"
#include "fairkg/eval.hpp"
#include "fairkg/optim.hpp"

namespace fairkg {

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be a finite non-negative number");
  }
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw ConfigError("weight decay must be a finite non-negative number");
  }
  if (max_epochs < 1) throw ConfigError("max epochs must be at least 1");
  if (patience < 1) throw ConfigError("patience must be at least 1");
  if (negative_ratio < 1) throw ConfigError("negative ratio must be at least 1");
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (max_hops < 2) throw ConfigError("max hops must be at least 2");
  fair.validate();
  model.validate();
}

std::vector<Triple> negative_sample(const Triple& triple, const KnowledgeGraph& graph, std::size_t ratio,
                                    std::mt19937_64& rng) {
  if (ratio < 1) throw Error("negative_sample: ratio must be at least 1");
  constexpr std::size_t kMaxDraws = 1000;
  std::uniform_int_distribution<std::uint32_t> entity(0, static_cast<std::uint32_t>(graph.num_entities() - 1));
  std::bernoulli_distribution coin(0.5);
  std::vector<Triple> out;
  out.reserve(ratio);
  for (std::size_t i = 0; i < ratio; ++i) {
    bool found = false;
    for (std::size_t draw = 0; draw < kMaxDraws && !found; ++draw) {
      Triple t = triple;
      if (coin(rng)) {
        t.head = EntityId{entity(rng)};
      } else {
        t.tail = EntityId{entity(rng)};
      }
      if (!graph.contains(t)) {
        out.push_back(t);
        found = true;
      }
    }
    if (!found) {
      throw Error("negative_sample: no corruption of (" + graph.entity_label(triple.head) + ", " +
                  graph.relation_label(triple.relation) + ", " + graph.entity_label(triple.tail) +
                  ") avoids the known triples");
    }
  }
  return out;
}

Var task_loss(Var entities, Var relations, std::span<const Triple> positives, std::span<const Triple> negatives) {
  std::vector<std::uint32_t> heads, rels, tails;
  std::vector<double> labels;
  const std::size_t n = positives.size() + negatives.size();
  heads.reserve(n);
  rels.reserve(n);
  tails.reserve(n);
  labels.reserve(n);
  auto push = [&](const Triple& t, double label) {
    heads.push_back(t.head.value);
    rels.push_back(t.relation.value);
    tails.push_back(t.tail.value);
    labels.push_back(label);
  };
  for (const Triple& t : positives) push(t, 1.0);
  for (const Triple& t : negatives) push(t, 0.0);
  if (labels.empty()) throw Error("task_loss: empty batch");
  return bce_with_logits(distmult_scores(entities, relations, heads, rels, tails), labels);
}

TrainResult train(const KnowledgeGraph& graph, const SplitSet& splits, const SensitiveConfig* sensitive,
                  const TrainConfig& config, std::uint64_t seed) {
  config.validate();
  if (splits.train.empty()) throw Error("train: the training split is empty");
  const bool fair_active = config.fair.active();
  if (fair_active && sensitive == nullptr) {
    throw ConfigError("the Fair Ratio loss needs a sensitive attribute configuration");
  }

  const MessageGraph message_graph = MessageGraph::build(graph.num_entities(), graph.num_relations(), splits.train);
  std::vector<FairTerm> terms;
  if (fair_active) {
    const KnowledgeGraph train_graph = graph.with_triples(splits.train);
    terms = fairness_terms(extract_biased_paths(train_graph, *sensitive, config.max_hops), *sensitive);
  }

  TrainResult result;
  ModelState state = init_model(config.model, graph.num_entities(), graph.num_relations(), seed);
  std::mt19937_64 rng(seed);
  std::mt19937_64 term_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  AdamOptions adam;
  adam.learning_rate = config.learning_rate;
  adam.weight_decay = config.weight_decay;
  AdamState optimizer(adam);
  std::vector<std::string> names;
  for (const Parameter& p : state.parameters) names.push_back(p.name);

  std::vector<Triple> order = splits.train;
  double best_mrr = -std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  result.state = state;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    EpochStats stats;
    stats.epoch = epoch;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      std::span<const Triple> positives(order.data() + start, stop - start);
      std::vector<Triple> negatives;
      negatives.reserve(positives.size() * config.negative_ratio);
      for (const Triple& t : positives) {
        const auto neg = negative_sample(t, graph, config.negative_ratio, rng);
        negatives.insert(negatives.end(), neg.begin(), neg.end());
      }

      Tape tape;
      const BoundParameters params = bind_parameters(tape, state, true);
      const EntityRelation enc = encode(message_graph, state, params, {true, &rng});
      Var l0 = task_loss(enc.entities, enc.relations, positives, negatives);
      Var loss = l0;
      double lfr_value = 0.0;
      if (fair_active) {
        const std::vector<FairTerm> sampled = sample_terms(terms, config.fair.pair_budget, term_rng);
        const double term_scale =
            sampled.empty() ? 1.0 : static_cast<double>(terms.size()) / static_cast<double>(sampled.size());
        Var lfr = fair_ratio_loss(enc.entities, enc.relations, *sensitive, sampled, config.fair, term_scale);
        lfr_value = lfr.value().item();
        loss = joint_loss(l0, lfr, config.fair.mu);
      }
      const double loss_value = loss.value().item();
      if (!std::isfinite(loss_value)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "non-finite loss at epoch %zu, batch %zu", epoch, batches + 1);
        throw NumericError(buf);
      }
      tape.backward(loss);
      std::vector<Tensor> values, grads;
      values.reserve(state.parameters.size());
      grads.reserve(state.parameters.size());
      for (std::size_t p = 0; p < state.parameters.size(); ++p) {
        values.push_back(std::move(state.parameters[p].value));
        grads.push_back(tape.grad(params.vars[p]));
      }
      try {
        adam_step(values, grads, optimizer, names);
      } catch (...) {
        for (std::size_t p = 0; p < values.size(); ++p) state.parameters[p].value = std::move(values[p]);
        throw;
      }
      for (std::size_t p = 0; p < values.size(); ++p) state.parameters[p].value = std::move(values[p]);

      stats.l0 += l0.value().item();
      stats.lfr += lfr_value;
      stats.loss += loss_value;
      ++batches;
    }
    stats.l0 /= static_cast<double>(batches);
    stats.lfr /= static_cast<double>(batches);
    stats.loss /= static_cast<double>(batches);

    if (splits.valid.empty()) {
      result.state = state;
      result.best_epoch = epoch;
      result.history.push_back(stats);
      continue;
    }
    const Representations reps = encode_eval(message_graph, state);
    stats.valid_mrr = filtered_mrr(reps, splits.valid, graph);
    result.history.push_back(stats);
    if (stats.valid_mrr > best_mrr) {
      best_mrr = stats.valid_mrr;
      since_best = 0;
      result.state = state;
      result.best_epoch = epoch;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  return result;
}

}  // namespace fairkg
