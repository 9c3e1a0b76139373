#include "fairkg/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fairkg/error.hpp"
#include "fairkg/report.hpp"

namespace fairkg {

std::string_view to_string(Test1Scope scope) {
  return scope == Test1Scope::all_bridges ? "all_bridges" : "test_bridges";
}

Test1Scope parse_test1_scope(std::string_view text) {
  if (text == "all_bridges") return Test1Scope::all_bridges;
  if (text == "test_bridges") return Test1Scope::test_bridges;
  throw ConfigError("unknown test1 scope '" + std::string(text) + "' (expected all_bridges or test_bridges)");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("'" + std::string(key) + "' expects a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("'" + std::string(key) + "' expects true or false, got '" + std::string(text) + "'");
}

std::vector<std::string> parse_list(std::string_view text) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

SensitiveLabels& sensitive(RunConfig& c) {
  if (!c.sensitive) c.sensitive.emplace();
  return *c.sensitive;
}

}  // namespace

void apply_setting(RunConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  TrainConfig& t = c.train;
  if (key == "model") {
    t.model.kind = parse_model_kind(value);
  } else if (key == "dim") {
    t.model.embedding_dim = parse_unsigned(key, value);
  } else if (key == "layers") {
    t.model.num_layers = parse_unsigned(key, value);
  } else if (key == "dropout") {
    t.model.dropout = parse_double(key, value);
  } else if (key == "activation") {
    t.model.activation = parse_activation(value);
  } else if (key == "share_relation_weights") {
    t.model.share_relation_weights = parse_bool(key, value);
  } else if (key == "compgcn_mean_aggregation") {
    t.model.compgcn_mean_aggregation = parse_bool(key, value);
  } else if (key == "lr") {
    t.learning_rate = parse_double(key, value);
  } else if (key == "weight_decay") {
    t.weight_decay = parse_double(key, value);
  } else if (key == "max_epochs") {
    t.max_epochs = parse_unsigned(key, value);
  } else if (key == "patience") {
    t.patience = parse_unsigned(key, value);
  } else if (key == "negative_ratio") {
    t.negative_ratio = parse_unsigned(key, value);
  } else if (key == "batch_size") {
    t.batch_size = parse_unsigned(key, value);
  } else if (key == "seed") {
    t.seed = parse_unsigned(key, value);
  } else if (key == "repetitions") {
    t.repetitions = parse_unsigned(key, value);
  } else if (key == "max_hops") {
    t.max_hops = static_cast<int>(parse_unsigned(key, value));
  } else if (key == "k") {
    t.fair.norm_order = static_cast<int>(parse_unsigned(key, value));
  } else if (key == "mu") {
    t.fair.mu = parse_double(key, value);
  } else if (key == "mode") {
    t.fair.mode = parse_fair_mode(value);
  } else if (key == "pair_budget") {
    t.fair.pair_budget = parse_unsigned(key, value);
  } else if (key == "split") {
    const auto parts = parse_list(value);
    if (parts.size() != 3) throw ConfigError("'split' expects three comma-separated fractions");
    c.ratios = {parse_double(key, parts[0]), parse_double(key, parts[1]), parse_double(key, parts[2])};
  } else if (key == "test1_scope") {
    c.test1_scope = parse_test1_scope(value);
  } else if (key == "sensitive") {
    sensitive(c).sensitive = parse_list(value);
  } else if (key == "sensitive_relation") {
    sensitive(c).sensitive_relation = std::string(value);
  } else if (key == "nonsensitive") {
    sensitive(c).nonsensitive = parse_list(value);
  } else if (key == "nonsensitive_relation") {
    sensitive(c).nonsensitive_relation = std::string(value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

RunConfig parse_run_config(std::istream& in, const std::string& source, RunConfig base) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [key, node] : tree) {
    if (!node.empty()) throw ConfigError(source + ": sections are not supported ([" + key + "])");
    try {
      apply_setting(base, key, node.data());
    } catch (const ConfigError& e) {
      throw ConfigError(source + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_run_config(in, path.string(), std::move(base));
}

std::string canonical_config(const TrainConfig& t, const SplitRatios& ratios, Test1Scope scope) {
  std::map<std::string, std::string> kv;
  kv["model"] = to_string(t.model.kind);
  kv["dim"] = std::to_string(t.model.embedding_dim);
  kv["layers"] = std::to_string(t.model.num_layers);
  kv["dropout"] = format_number(t.model.dropout);
  kv["activation"] = to_string(t.model.resolved_activation());
  kv["share_relation_weights"] = t.model.share_relation_weights ? "true" : "false";
  kv["compgcn_mean_aggregation"] = t.model.compgcn_mean_aggregation ? "true" : "false";
  kv["lr"] = format_number(t.learning_rate);
  kv["weight_decay"] = format_number(t.weight_decay);
  kv["max_epochs"] = std::to_string(t.max_epochs);
  kv["patience"] = std::to_string(t.patience);
  kv["negative_ratio"] = std::to_string(t.negative_ratio);
  kv["batch_size"] = std::to_string(t.batch_size);
  kv["seed"] = std::to_string(t.seed);
  kv["repetitions"] = std::to_string(t.repetitions);
  kv["max_hops"] = std::to_string(t.max_hops);
  kv["k"] = std::to_string(t.fair.norm_order);
  kv["mu"] = format_number(t.fair.mu);
  kv["mode"] = to_string(t.fair.mode);
  kv["pair_budget"] = std::to_string(t.fair.pair_budget);
  kv["split"] = format_number(ratios.train) + "," + format_number(ratios.valid) + "," + format_number(ratios.test);
  kv["test1_scope"] = to_string(scope);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string config_digest(const TrainConfig& train, const SplitRatios& ratios, Test1Scope scope) {
  return fnv1a_hex(canonical_config(train, ratios, scope));
}

}  // namespace fairkg
