#include "fairkg/models.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fairkg/error.hpp"

namespace fairkg {

std::string_view to_string(ModelKind kind) { return kind == ModelKind::rgcn ? "rgcn" : "compgcn"; }

std::string_view to_string(Activation act) {
  switch (act) {
    case Activation::identity: return "identity";
    case Activation::tanh: return "tanh";
    case Activation::relu: return "relu";
  }
  return "identity";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "rgcn") return ModelKind::rgcn;
  if (text == "compgcn") return ModelKind::compgcn;
  throw ConfigError("unknown model '" + std::string(text) + "' (expected rgcn or compgcn)");
}

Activation parse_activation(std::string_view text) {
  if (text == "identity") return Activation::identity;
  if (text == "tanh") return Activation::tanh;
  if (text == "relu") return Activation::relu;
  throw ConfigError("unknown activation '" + std::string(text) + "'");
}

Activation ModelConfig::resolved_activation() const {
  if (activation) return *activation;
  return kind == ModelKind::rgcn ? Activation::identity : Activation::tanh;
}

void ModelConfig::validate() const {
  if (embedding_dim < 1) throw ConfigError("embedding dimension must be at least 1");
  if (num_layers > 3) throw ConfigError("at most 3 layers are supported");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
}

std::size_t ModelState::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    if (parameters[i].name == name) return i;
  }
  throw Error("no parameter named '" + std::string(name) + "'");
}

Tensor& ModelState::param(std::string_view name) { return parameters[index_of(name)].value; }
const Tensor& ModelState::param(std::string_view name) const { return parameters[index_of(name)].value; }

namespace {

std::size_t relation_rows(ModelKind kind, std::size_t num_relations) {
  return kind == ModelKind::rgcn ? num_relations : 2 * num_relations + 1;
}

std::size_t weights_per_layer(const ModelConfig& c, std::size_t num_relations) {
  if (c.kind == ModelKind::compgcn) return 4;
  return (c.share_relation_weights ? 1 : 2 * num_relations) + 1;
}

// Registry index of the first weight of `layer`.
std::size_t layer_offset(const ModelConfig& c, std::size_t num_relations, std::size_t layer) {
  return 2 + layer * weights_per_layer(c, num_relations);
}

Tensor uniform(Shape shape, double bound, std::mt19937_64& rng) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& v : t.values()) v = dist(rng);
  return t;
}

Var activate(Var x, Activation act) {
  switch (act) {
    case Activation::identity: return x;
    case Activation::tanh: return tanh(x);
    case Activation::relu: return relu(x);
  }
  return x;
}

}  // namespace

ModelState init_model(const ModelConfig& config, std::size_t num_entities, std::size_t num_relations,
                      std::uint64_t seed) {
  config.validate();
  ModelState state;
  state.config = config;
  state.num_entities = num_entities;
  state.num_relations = num_relations;
  const std::size_t d = config.embedding_dim;
  std::mt19937_64 rng(seed);
  const double emb_bound = 1.0 / std::sqrt(static_cast<double>(d));
  const double w_bound = std::sqrt(6.0 / (2.0 * static_cast<double>(d)));

  state.parameters.push_back({"entity_embedding", uniform({num_entities, d}, emb_bound, rng)});
  state.parameters.push_back(
      {"relation_embedding", uniform({relation_rows(config.kind, num_relations), d}, emb_bound, rng)});
  for (std::size_t l = 0; l < config.num_layers; ++l) {
    const std::string prefix = "layer" + std::to_string(l) + ".";
    if (config.kind == ModelKind::rgcn) {
      if (config.share_relation_weights) {
        state.parameters.push_back({prefix + "relation_weight", uniform({d, d}, w_bound, rng)});
      } else {
        for (std::size_t r = 0; r < 2 * num_relations; ++r) {
          state.parameters.push_back(
              {prefix + "relation_weight." + std::to_string(r), uniform({d, d}, w_bound, rng)});
        }
      }
      state.parameters.push_back({prefix + "self_weight", uniform({d, d}, w_bound, rng)});
    } else {
      for (const char* name : {"w_in", "w_out", "w_loop", "w_rel"}) {
        state.parameters.push_back({prefix + name, uniform({d, d}, w_bound, rng)});
      }
    }
  }
  return state;
}

MessageGraph MessageGraph::build(std::size_t num_entities, std::size_t num_relations,
                                 std::span<const Triple> triples) {
  MessageGraph g;
  g.num_entities = num_entities;
  g.num_relations = num_relations;
  g.src.assign(2 * num_relations, {});
  g.dst.assign(2 * num_relations, {});
  g.degree.assign(num_entities, 0.0);
  for (const Triple& t : triples) {
    const std::uint32_t r = t.relation.value;
    g.src[r].push_back(t.head.value);
    g.dst[r].push_back(t.tail.value);
    g.src[r + num_relations].push_back(t.tail.value);
    g.dst[r + num_relations].push_back(t.head.value);
    g.degree[t.tail.value] += 1.0;
    g.degree[t.head.value] += 1.0;
  }
  return g;
}

BoundParameters bind_parameters(Tape& tape, const ModelState& state, bool trainable) {
  BoundParameters out;
  out.vars.reserve(state.parameters.size());
  for (const Parameter& p : state.parameters) {
    out.vars.push_back(trainable ? tape.leaf(p.value) : tape.constant(p.value));
  }
  return out;
}

namespace {

std::vector<double> inverse_degree(const MessageGraph& g, std::span<const std::uint32_t> dst) {
  std::vector<double> coef(dst.size());
  for (std::size_t e = 0; e < dst.size(); ++e) coef[e] = 1.0 / g.degree[dst[e]];
  return coef;
}

}  // namespace

Var rgcn_layer(const MessageGraph& graph, Var h_prev, std::span<const Var> relation_weights, Var self_weight,
               Activation act) {
  const std::size_t n = graph.num_entities;
  if (h_prev.value().rank() != 2 || h_prev.value().rows() != n) {
    throw ShapeError("rgcn_layer: entity table must have one row per entity");
  }
  const bool shared = relation_weights.size() == 1;
  if (!shared && relation_weights.size() != graph.typed_relations()) {
    throw ShapeError("rgcn_layer: need one weight per typed relation or a single shared weight");
  }
  std::vector<Var> terms;
  terms.push_back(linear(h_prev, self_weight));
  if (shared) {
    std::vector<std::uint32_t> src, dst;
    for (std::size_t r = 0; r < graph.typed_relations(); ++r) {
      src.insert(src.end(), graph.src[r].begin(), graph.src[r].end());
      dst.insert(dst.end(), graph.dst[r].begin(), graph.dst[r].end());
    }
    if (!src.empty()) {
      Var transformed = linear(h_prev, relation_weights[0]);
      terms.push_back(scatter_rows(gather_rows(transformed, src), dst, inverse_degree(graph, dst), n));
    }
  } else {
    for (std::size_t r = 0; r < graph.typed_relations(); ++r) {
      if (graph.src[r].empty()) continue;
      Var messages = linear(gather_rows(h_prev, graph.src[r]), relation_weights[r]);
      terms.push_back(scatter_rows(messages, graph.dst[r], inverse_degree(graph, graph.dst[r]), n));
    }
  }
  return activate(add_n(terms), act);
}

EntityRelation compgcn_layer(const MessageGraph& graph, Var h_prev, Var r_prev, const CompgcnWeights& w,
                             Activation act, bool mean_aggregation) {
  const std::size_t n = graph.num_entities;
  const std::size_t nr = graph.num_relations;
  if (h_prev.value().rank() != 2 || h_prev.value().rows() != n) {
    throw ShapeError("compgcn_layer: entity table must have one row per entity");
  }
  if (r_prev.value().rank() != 2 || r_prev.value().rows() != 2 * nr + 1) {
    throw ShapeError("compgcn_layer: relation table must have 2|R| + 1 rows");
  }
  std::vector<Var> terms;
  // Original-direction edges use W_in, inverse edges W_out.
  for (int direction = 0; direction < 2; ++direction) {
    std::vector<std::uint32_t> src, dst, rel;
    for (std::size_t r = direction * nr; r < (direction + 1) * nr; ++r) {
      src.insert(src.end(), graph.src[r].begin(), graph.src[r].end());
      dst.insert(dst.end(), graph.dst[r].begin(), graph.dst[r].end());
      rel.insert(rel.end(), graph.src[r].size(), static_cast<std::uint32_t>(r));
    }
    if (src.empty()) continue;
    Var composed = composition_psi(gather_rows(h_prev, src), gather_rows(r_prev, rel));
    Var messages = linear(composed, direction == 0 ? w.in : w.out);
    const std::vector<double> coef = mean_aggregation ? inverse_degree(graph, dst) : std::vector<double>{};
    terms.push_back(scatter_rows(messages, dst, coef, n));
  }
  const std::vector<std::uint32_t> loop_rows(n, static_cast<std::uint32_t>(2 * nr));
  terms.push_back(linear(composition_psi(h_prev, gather_rows(r_prev, loop_rows)), w.loop));
  return {activate(add_n(terms), act), linear(r_prev, w.relation)};
}

Var composition_psi(Var h_u, Var h_r) { return hadamard(h_u, h_r); }

Tensor composition_psi(const Tensor& h_u, const Tensor& h_r) { return hadamard(h_u, h_r); }

double distmult_score(std::span<const double> head, std::span<const double> rel, std::span<const double> tail) {
  if (head.size() != rel.size() || head.size() != tail.size()) {
    throw ShapeError("distmult_score: dimension mismatch");
  }
  double acc = 0.0;
  for (std::size_t d = 0; d < head.size(); ++d) acc += head[d] * rel[d] * tail[d];
  return acc;
}

Var distmult_scores(Var entities, Var relations, std::span<const std::uint32_t> heads,
                    std::span<const std::uint32_t> rels, std::span<const std::uint32_t> tails) {
  Var h = gather_rows(entities, heads);
  Var r = gather_rows(relations, rels);
  Var t = gather_rows(entities, tails);
  return row_sum(hadamard(hadamard(h, r), t));
}

EntityRelation encode(const MessageGraph& graph, const ModelState& state, const BoundParameters& params,
                      const EncodeOptions& options) {
  const ModelConfig& c = state.config;
  if (params.vars.size() != state.parameters.size()) throw Error("encode: parameters not bound");
  if (graph.num_entities != state.num_entities || graph.num_relations != state.num_relations) {
    throw ShapeError("encode: graph does not match the model vocabulary sizes");
  }
  const Activation act = c.resolved_activation();
  Var h = params.vars[0];
  Var rel = params.vars[1];
  for (std::size_t l = 0; l < c.num_layers; ++l) {
    const std::size_t off = layer_offset(c, state.num_relations, l);
    if (c.kind == ModelKind::rgcn) {
      const std::size_t count = c.share_relation_weights ? 1 : 2 * state.num_relations;
      std::span<const Var> weights(params.vars.data() + off, count);
      h = rgcn_layer(graph, h, weights, params.vars[off + count], act);
    } else {
      const CompgcnWeights w{params.vars[off], params.vars[off + 1], params.vars[off + 2], params.vars[off + 3]};
      auto out = compgcn_layer(graph, h, rel, w, act, c.compgcn_mean_aggregation);
      h = out.entities;
      rel = out.relations;
      const bool between = l + 1 < c.num_layers;
      if (options.training && between && c.dropout > 0.0) {
        if (options.rng == nullptr) throw Error("encode: training-mode dropout needs an rng");
        Tensor mask = Tensor::zeros_like(h.value());
        std::bernoulli_distribution keep(1.0 - c.dropout);
        const double scale_kept = 1.0 / (1.0 - c.dropout);
        for (double& m : mask.values()) m = keep(*options.rng) ? scale_kept : 0.0;
        h = hadamard(h, h.tape().constant(std::move(mask)));
      }
    }
  }
  return {h, rel};
}

Representations encode_eval(const MessageGraph& graph, const ModelState& state) {
  Tape tape;
  const BoundParameters params = bind_parameters(tape, state, false);
  const EntityRelation out = encode(graph, state, params);
  return {out.entities.value(), out.relations.value()};
}

// ---------------------------------------------------------------------------

namespace {

constexpr const char* kCheckpointFormat = "fairkg-checkpoint";
constexpr int kCheckpointVersion = 1;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelState& state, std::uint64_t vocabulary_hash) {
  using nlohmann::json;
  const ModelConfig& c = state.config;
  json cfg = {{"model", to_string(c.kind)},
              {"dim", c.embedding_dim},
              {"layers", c.num_layers},
              {"dropout", c.dropout},
              {"activation", to_string(c.resolved_activation())},
              {"share_relation_weights", c.share_relation_weights},
              {"compgcn_mean_aggregation", c.compgcn_mean_aggregation}};
  json params = json::array();
  for (const Parameter& p : state.parameters) {
    params.push_back({{"name", p.name},
                      {"shape", p.value.shape()},
                      {"values", std::vector<double>(p.value.values().begin(), p.value.values().end())}});
  }
  json doc = {{"format", kCheckpointFormat},
              {"version", kCheckpointVersion},
              {"vocabulary_hash", hex64(vocabulary_hash)},
              {"num_entities", state.num_entities},
              {"num_relations", state.num_relations},
              {"config", cfg},
              {"parameters", params}};
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot write checkpoint " + path);
    out << doc.dump() << '\n';
    if (!out) throw Error("failed writing checkpoint " + path);
  }
  std::filesystem::rename(tmp, path);
}

ModelState load_checkpoint(const std::string& path, std::uint64_t expected_vocabulary_hash) {
  using nlohmann::json;
  std::ifstream in(path);
  if (!in) throw Error("cannot open checkpoint " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("checkpoint " + path + " is not valid JSON: " + e.what());
  }
  try {
    if (doc.at("format") != kCheckpointFormat || doc.at("version") != kCheckpointVersion) {
      throw Error("checkpoint " + path + " has an unsupported format or version");
    }
    if (doc.at("vocabulary_hash").get<std::string>() != hex64(expected_vocabulary_hash)) {
      throw Error("checkpoint " + path + " was trained on a different vocabulary");
    }
    ModelState state;
    const json& cfg = doc.at("config");
    state.config.kind = parse_model_kind(cfg.at("model").get<std::string>());
    state.config.embedding_dim = cfg.at("dim").get<std::size_t>();
    state.config.num_layers = cfg.at("layers").get<std::size_t>();
    state.config.dropout = cfg.at("dropout").get<double>();
    state.config.activation = parse_activation(cfg.at("activation").get<std::string>());
    state.config.share_relation_weights = cfg.at("share_relation_weights").get<bool>();
    state.config.compgcn_mean_aggregation = cfg.at("compgcn_mean_aggregation").get<bool>();
    state.num_entities = doc.at("num_entities").get<std::size_t>();
    state.num_relations = doc.at("num_relations").get<std::size_t>();
    const ModelState layout = init_model(state.config, state.num_entities, state.num_relations, 0);
    const json& params = doc.at("parameters");
    if (params.size() != layout.parameters.size()) throw Error("checkpoint " + path + " has a wrong parameter count");
    for (std::size_t i = 0; i < params.size(); ++i) {
      Parameter p{params[i].at("name").get<std::string>(),
                  Tensor(params[i].at("shape").get<Shape>(), params[i].at("values").get<std::vector<double>>())};
      if (p.name != layout.parameters[i].name || p.value.shape() != layout.parameters[i].value.shape()) {
        throw Error("checkpoint " + path + ": parameter '" + p.name + "' does not match the model layout");
      }
      state.parameters.push_back(std::move(p));
    }
    return state;
  } catch (const json::exception& e) {
    throw Error("checkpoint " + path + " is malformed: " + e.what());
  }
}

}  // namespace fairkg
