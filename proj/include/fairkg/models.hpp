#pragma once

// RGCN and CompGCN encoders with a DistMult decoder.
//
// Both encoders aggregate over the training triples plus their inverses: a
// triple (h, r, t) sends h -> t with relation r and t -> h with relation
// r + |R|. Parameters live in a flat, named registry (ModelState::parameters)
// that is the complete set of trainable tensors.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairkg/autodiff.hpp"
#include "fairkg/graph.hpp"
#include "fairkg/tensor.hpp"

namespace fairkg {

enum class ModelKind { rgcn, compgcn };
enum class Activation { identity, tanh, relu };

std::string_view to_string(ModelKind kind);
std::string_view to_string(Activation act);
ModelKind parse_model_kind(std::string_view text);
Activation parse_activation(std::string_view text);

struct ModelConfig {
  ModelKind kind = ModelKind::rgcn;
  std::size_t embedding_dim = 64;
  std::size_t num_layers = 2;
  /// Applied between CompGCN layers in training mode; RGCN ignores it.
  double dropout = 0.1;
  /// Empty means the per-model default: identity for RGCN, tanh for CompGCN.
  std::optional<Activation> activation;
  /// RGCN only: one relation weight shared by every relation type.
  bool share_relation_weights = false;
  /// CompGCN only: scale every edge message by 1 / |N(v)|.
  bool compgcn_mean_aggregation = false;

  Activation resolved_activation() const;
  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

struct Parameter {
  std::string name;
  Tensor value;
};

struct ModelState {
  ModelConfig config;
  std::size_t num_entities = 0;
  std::size_t num_relations = 0;  // base relations, without inverses
  std::vector<Parameter> parameters;

  Tensor& param(std::string_view name);
  const Tensor& param(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;
};

/// Embeddings uniform in [-1/sqrt(dim), 1/sqrt(dim)]; weight matrices
/// Glorot-uniform. Deterministic in `seed`.
ModelState init_model(const ModelConfig& config, std::size_t num_entities, std::size_t num_relations,
                      std::uint64_t seed);

/// Message-passing view of a triple list, grouped by typed relation.
struct MessageGraph {
  std::size_t num_entities = 0;
  std::size_t num_relations = 0;  // base relations
  /// Indexed by typed relation r in [0, 2|R|): sources and destinations.
  std::vector<std::vector<std::uint32_t>> src;
  std::vector<std::vector<std::uint32_t>> dst;
  /// Pooled neighbourhood size |N(v)| over all typed relations.
  std::vector<double> degree;

  static MessageGraph build(std::size_t num_entities, std::size_t num_relations,
                            std::span<const Triple> triples);
  std::size_t typed_relations() const { return 2 * num_relations; }
};

/// Tape handles for every registered parameter, in registry order.
struct BoundParameters {
  std::vector<Var> vars;
};

/// Puts every parameter on the tape, as leaves when `trainable` is set and
/// as constants otherwise.
BoundParameters bind_parameters(Tape& tape, const ModelState& state, bool trainable);

/// One RGCN layer:
///   h_v' = act( sum_{(u,r) in N(v)} W_r h_u / |N(v)| + W_self h_v ).
/// `relation_weights` holds one matrix per typed relation, or a single shared
/// matrix.
Var rgcn_layer(const MessageGraph& graph, Var h_prev, std::span<const Var> relation_weights, Var self_weight,
               Activation act);

struct CompgcnWeights {
  Var in;        // original direction
  Var out;       // inverse direction
  Var loop;      // self-loop
  Var relation;  // relation update
};

struct EntityRelation {
  Var entities;
  Var relations;
};

/// One CompGCN layer with multiplicative composition:
///   h_v' = act( sum_{(u,r) in N(v)} W_dir(r) (h_u * h_r) + W_loop (h_v * h_loop) )
///   H_r' = W_rel H_r
/// `r_prev` has 2|R| + 1 rows; the last is the self-loop relation.
EntityRelation compgcn_layer(const MessageGraph& graph, Var h_prev, Var r_prev, const CompgcnWeights& w,
                             Activation act, bool mean_aggregation);

/// Composition operator: elementwise product h_u * h_r.
Var composition_psi(Var h_u, Var h_r);
Tensor composition_psi(const Tensor& h_u, const Tensor& h_r);

/// sum_d head[d] * rel[d] * tail[d].
double distmult_score(std::span<const double> head, std::span<const double> rel, std::span<const double> tail);

/// Batched DistMult: scores for (heads[i], rels[i], tails[i]).
Var distmult_scores(Var entities, Var relations, std::span<const std::uint32_t> heads,
                    std::span<const std::uint32_t> rels, std::span<const std::uint32_t> tails);

struct EncodeOptions {
  bool training = false;
  /// Source of dropout masks in training mode; unused otherwise.
  std::mt19937_64* rng = nullptr;
};

/// Final entity representations (|V| x dim) and the relation rows used by
/// the decoder (|R| x dim for RGCN, (2|R| + 1) x dim for CompGCN).
EntityRelation encode(const MessageGraph& graph, const ModelState& state, const BoundParameters& params,
                      const EncodeOptions& options = {});

/// Evaluation-mode encode without recording gradients.
struct Representations {
  Tensor entities;
  Tensor relations;
};
Representations encode_eval(const MessageGraph& graph, const ModelState& state);

// ---------------------------------------------------------------------------
// Checkpoints: JSON holding the config, the vocabulary hash and every tensor.

void save_checkpoint(const std::string& path, const ModelState& state, std::uint64_t vocabulary_hash);
/// Throws Error when the stored vocabulary hash differs from
/// `expected_vocabulary_hash`.
ModelState load_checkpoint(const std::string& path, std::uint64_t expected_vocabulary_hash);

}  // namespace fairkg
