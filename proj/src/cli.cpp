#include "fairkg/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairkg/config.hpp"
#include "fairkg/error.hpp"
#include "fairkg/eval.hpp"
#include "fairkg/fairness.hpp"
#include "fairkg/graph.hpp"
#include "fairkg/models.hpp"
#include "fairkg/report.hpp"
#include "fairkg/train.hpp"

namespace fairkg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Options shared by every command that reads a graph and a run config.
struct GraphOptions {
  std::string graph;
  std::string train_file, valid_file, test_file;
  std::string config;
  std::string sensitive;
  std::vector<std::string> overrides;
  // Convenience flags, applied after --set.
  std::optional<std::uint64_t> seed;
  std::optional<double> mu;
  std::optional<std::size_t> layers, dim, epochs, repetitions;
  std::optional<double> lr;
  std::string model, mode;
};

void add_graph_options(CLI::App& cmd, GraphOptions& o) {
  cmd.add_option("--graph", o.graph, "Triple file (head<TAB>relation<TAB>tail)");
  cmd.add_option("--train-file", o.train_file, "Pre-split training triples");
  cmd.add_option("--valid-file", o.valid_file, "Pre-split validation triples");
  cmd.add_option("--test-file", o.test_file, "Pre-split test triples");
  cmd.add_option("--config", o.config, "Run config file (key = value)");
  cmd.add_option("--sensitive", o.sensitive, "Config file holding the sensitive / non-sensitive keys");
  cmd.add_option("--set", o.overrides, "Override one config key, as key=value")->take_all();
  cmd.add_option("--seed", o.seed, "Base seed");
  cmd.add_option("--mu", o.mu, "Fair Ratio weight");
  cmd.add_option("--layers", o.layers, "Encoder depth");
  cmd.add_option("--dim", o.dim, "Embedding dimension");
  cmd.add_option("--epochs", o.epochs, "Maximum epochs");
  cmd.add_option("--repetitions", o.repetitions, "Repetitions with consecutive seeds");
  cmd.add_option("--lr", o.lr, "Learning rate");
  cmd.add_option("--model", o.model, "rgcn or compgcn");
  cmd.add_option("--mode", o.mode, "baseline, sbm_only or sbm_erp");
}

struct Loaded {
  std::optional<KnowledgeGraph> graph;
  std::optional<SplitSet> presplit;
  RunConfig config;
  std::vector<std::string> inputs;
};

Loaded load_inputs(const GraphOptions& o) {
  const bool presplit = !o.train_file.empty() || !o.valid_file.empty() || !o.test_file.empty();
  if (presplit && (o.train_file.empty() || o.valid_file.empty() || o.test_file.empty())) {
    throw UsageError("--train-file, --valid-file and --test-file go together");
  }
  if (presplit == !o.graph.empty()) throw UsageError("give either --graph or the three pre-split files");

  Loaded l;
  if (!o.config.empty()) {
    l.config = load_run_config(o.config);
    l.inputs.push_back(o.config);
  }
  if (!o.sensitive.empty()) {
    l.config = load_run_config(o.sensitive, l.config);
    l.inputs.push_back(o.sensitive);
  }
  for (const std::string& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    apply_setting(l.config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  TrainConfig& t = l.config.train;
  if (o.seed) t.seed = *o.seed;
  if (o.mu) t.fair.mu = *o.mu;
  if (o.layers) t.model.num_layers = *o.layers;
  if (o.dim) t.model.embedding_dim = *o.dim;
  if (o.epochs) t.max_epochs = *o.epochs;
  if (o.repetitions) t.repetitions = *o.repetitions;
  if (o.lr) t.learning_rate = *o.lr;
  if (!o.model.empty()) t.model.kind = parse_model_kind(o.model);
  if (!o.mode.empty()) t.fair.mode = parse_fair_mode(o.mode);
  t.validate();

  if (presplit) {
    PresplitGraph p = load_presplit(o.train_file, o.valid_file, o.test_file);
    l.graph.emplace(std::move(p.graph));
    l.presplit = std::move(p.splits);
    l.inputs.insert(l.inputs.end(), {o.train_file, o.valid_file, o.test_file});
  } else {
    l.graph.emplace(load_triples(o.graph));
    l.inputs.push_back(o.graph);
  }
  return l;
}

SensitiveConfig require_sensitive(const Loaded& l) {
  if (!l.config.sensitive) {
    throw ConfigError("no sensitive attribute configuration (sensitive, sensitive_relation, nonsensitive, "
                      "nonsensitive_relation); pass --sensitive or put the keys in --config");
  }
  return resolve_sensitive(*l.graph, *l.config.sensitive);
}

SplitSet splits_for(const Loaded& l, const SensitiveConfig* sensitive, std::uint64_t seed) {
  if (l.presplit) return *l.presplit;
  return split(*l.graph, l.config.ratios, sensitive, seed);
}

fs::path output_path(const std::string& given, const std::string& fallback) {
  if (!given.empty()) return given;
  const char* dir = std::getenv("FAIRKG_OUTPUT_DIR");
  return fs::path(dir != nullptr && *dir != '\0' ? dir : ".") / fallback;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "unreadable";
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a_hex(ss.str());
}

json config_json(const RunConfig& c) {
  json cfg = json::object();
  std::istringstream lines(canonical_config(c.train, c.ratios, c.test1_scope));
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    cfg[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (c.sensitive) {
    cfg["sensitive"] = c.sensitive->sensitive;
    cfg["sensitive_relation"] = c.sensitive->sensitive_relation;
    cfg["nonsensitive"] = c.sensitive->nonsensitive;
    cfg["nonsensitive_relation"] = c.sensitive->nonsensitive_relation;
  }
  return cfg;
}

struct Manifest {
  std::string command;
  json config = json::object();
  std::string config_digest;
  std::vector<std::string> inputs;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(const fs::path& path) const {
    json in = json::object();
    for (const std::string& p : inputs) in[p] = file_digest(p);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json doc = {{"command", command},      {"config", config},   {"config_digest", config_digest},
                {"inputs", in},            {"seeds", seeds},     {"outputs", outputs},
                {"duration_seconds", round6(seconds)}};
    write_file_atomic(path, doc.dump(2) + "\n");
  }
};

Manifest manifest_for(const std::string& command, const Loaded& l) {
  Manifest m;
  m.command = command;
  m.config = config_json(l.config);
  m.config_digest = config_digest(l.config.train, l.config.ratios, l.config.test1_scope);
  m.inputs = l.inputs;
  return m;
}

fs::path manifest_path(const fs::path& output) {
  fs::path p = output;
  p += ".manifest.json";
  return p;
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t n) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < n; ++i) seeds.push_back(first + i);
  return seeds;
}

RunSpec run_spec(const Loaded& l, const SensitiveConfig& sensitive) {
  RunSpec spec;
  spec.graph = &*l.graph;
  spec.sensitive = sensitive;
  spec.train = l.config.train;
  spec.ratios = l.config.ratios;
  spec.fixed_splits = l.presplit;
  spec.test1_scope = l.config.test1_scope;
  return spec;
}

// ---------------------------------------------------------------------------

int cmd_ingest(const GraphOptions& o, const std::string& out_path, std::ostream& out) {
  const Loaded l = load_inputs(o);
  const KnowledgeGraph& g = *l.graph;
  json stats = {{"entities", g.num_entities()},
                {"relations", g.num_relations()},
                {"triples", g.triples().size()},
                {"duplicates_dropped", g.duplicates_dropped()}};
  if (l.presplit) {
    stats["train"] = l.presplit->train.size();
    stats["valid"] = l.presplit->valid.size();
    stats["test"] = l.presplit->test.size();
  }
  if (l.config.sensitive) {
    const SensitiveConfig s = resolve_sensitive(g, *l.config.sensitive);
    stats["biased_paths"] = extract_biased_paths(g, s, l.config.train.max_hops).size();
  }
  out << stats.dump(2) << "\n";
  if (!out_path.empty()) {
    std::ostringstream ss;
    write_triples(ss, g, g.triples());
    write_file_atomic(out_path, ss.str());
    Manifest m = manifest_for("ingest", l);
    m.outputs = {out_path};
    m.write(manifest_path(out_path));
  }
  return kExitOk;
}

struct SynthArgs {
  std::size_t bridges = 200;
  double bias = 0.8;
  std::size_t nonsensitive = 4;
  std::uint64_t seed = 0;
  double coupling = 0.0;
  std::string out;
  std::string sensitive_out;
};

int cmd_synth(const SynthArgs& a, std::ostream& err) {
  const SynthGraph s = synth_biased_kg(a.bridges, a.bias, a.nonsensitive, a.seed, {a.coupling});
  const fs::path path = output_path(a.out, "synth.tsv");
  std::ostringstream triples;
  write_triples(triples, s.graph, s.graph.triples());
  write_file_atomic(path, triples.str());
  const fs::path sens_path =
      a.sensitive_out.empty() ? fs::path(path.string() + ".sensitive.cfg") : fs::path(a.sensitive_out);
  const SensitiveLabels labels = sensitive_labels(s.graph, s.config);
  std::ostringstream cfg;
  auto join = [](const std::vector<std::string>& v) {
    std::string outs;
    for (std::size_t i = 0; i < v.size(); ++i) outs += (i ? "," : "") + v[i];
    return outs;
  };
  cfg << "sensitive = " << join(labels.sensitive) << "\n"
      << "sensitive_relation = " << labels.sensitive_relation << "\n"
      << "nonsensitive = " << join(labels.nonsensitive) << "\n"
      << "nonsensitive_relation = " << labels.nonsensitive_relation << "\n";
  write_file_atomic(sens_path, cfg.str());

  Manifest m;
  m.command = "synth";
  m.config = {{"bridges", a.bridges},
              {"bias", round6(a.bias)},
              {"nonsensitive", a.nonsensitive},
              {"coupling", round6(a.coupling)},
              {"seed", a.seed}};
  m.config_digest = fnv1a_hex(m.config.dump());
  m.seeds = {a.seed};
  m.outputs = {path.string(), sens_path.string()};
  m.write(manifest_path(path));
  err << "wrote " << path.string() << " (" << s.graph.triples().size() << " triples) and " << sens_path.string()
      << "\n";
  return kExitOk;
}

int cmd_train(const GraphOptions& o, const std::string& out_arg, const std::string& history_arg,
              std::ostream& err) {
  const Loaded l = load_inputs(o);
  const TrainConfig& t = l.config.train;
  std::optional<SensitiveConfig> sensitive;
  if (l.config.sensitive) sensitive = require_sensitive(l);
  if (t.fair.active() && !sensitive) require_sensitive(l);
  const SplitSet splits = splits_for(l, sensitive ? &*sensitive : nullptr, t.seed);
  const TrainResult r = train(*l.graph, splits, sensitive ? &*sensitive : nullptr, t, t.seed);

  const fs::path path = output_path(out_arg, "model.ckpt");
  save_checkpoint(path.string(), r.state, l.graph->vocabulary_hash());
  const fs::path history = history_arg.empty() ? fs::path(path.string() + ".history.csv") : fs::path(history_arg);
  std::ostringstream csv;
  csv << "epoch,l0,lfr,loss,valid_mrr\n";
  for (const EpochStats& e : r.history) {
    csv << e.epoch << ',' << format_number(e.l0) << ',' << format_number(e.lfr) << ',' << format_number(e.loss)
        << ',' << format_number(e.valid_mrr) << '\n';
  }
  write_file_atomic(history, csv.str());

  Manifest m = manifest_for("train", l);
  m.seeds = {t.seed};
  m.outputs = {path.string(), history.string()};
  m.write(manifest_path(path));
  err << "trained " << r.history.size() << " epochs, best epoch " << r.best_epoch << ", wrote " << path.string()
      << "\n";
  return kExitOk;
}

int cmd_eval(const GraphOptions& o, const std::string& checkpoint, const std::string& out_arg, std::ostream& out) {
  const Loaded l = load_inputs(o);
  const SensitiveConfig sensitive = require_sensitive(l);
  EvalReport report;
  std::vector<std::uint64_t> seeds;
  if (!checkpoint.empty()) {
    const ModelState state = load_checkpoint(checkpoint, l.graph->vocabulary_hash());
    const SplitSet splits = splits_for(l, &sensitive, l.config.train.seed);
    SeedMetrics m = evaluate_run(state, *l.graph, splits, sensitive, l.config.test1_scope);
    m.seed = l.config.train.seed;
    report.per_seed.push_back(m);
    report.config_digest = config_digest(l.config.train, l.config.ratios, l.config.test1_scope);
    report.aggregate();
    seeds = {m.seed};
  } else {
    report = repeat_and_aggregate(run_spec(l, sensitive), l.config.train.repetitions);
    seeds = seed_range(l.config.train.seed, l.config.train.repetitions);
  }
  const std::string text = report.to_json();
  if (out_arg.empty() && std::getenv("FAIRKG_OUTPUT_DIR") == nullptr) {
    out << text;
  } else {
    const fs::path path = output_path(out_arg, "eval.json");
    write_file_atomic(path, text);
    Manifest m = manifest_for("eval", l);
    if (!checkpoint.empty()) m.inputs.push_back(checkpoint);
    m.seeds = seeds;
    m.outputs = {path.string()};
    m.write(manifest_path(path));
  }
  return report.complete ? kExitOk : kExitRuntime;
}

int cmd_audit(const GraphOptions& o, const std::string& checkpoint, const std::string& out_arg, std::ostream& out) {
  const Loaded l = load_inputs(o);
  const SensitiveConfig sensitive = require_sensitive(l);
  ModelState state = checkpoint.empty()
                         ? init_model(l.config.train.model, l.graph->num_entities(), l.graph->num_relations(),
                                      l.config.train.seed)
                         : load_checkpoint(checkpoint, l.graph->vocabulary_hash());
  const SplitSet splits = splits_for(l, &sensitive, l.config.train.seed);
  const MessageGraph mg = MessageGraph::build(l.graph->num_entities(), l.graph->num_relations(), splits.train);
  const InclinationReport report = audit_inclinations(sensitive, encode_eval(mg, state), l.config.train.fair.norm_order);
  std::ostringstream csv;
  write_inclination_csv(csv, *l.graph, report);
  if (out_arg.empty() && std::getenv("FAIRKG_OUTPUT_DIR") == nullptr) {
    out << csv.str();
    return kExitOk;
  }
  const fs::path path = output_path(out_arg, "inclinations.csv");
  write_file_atomic(path, csv.str());
  Manifest m = manifest_for("audit", l);
  if (!checkpoint.empty()) m.inputs.push_back(checkpoint);
  m.seeds = {l.config.train.seed};
  m.outputs = {path.string()};
  m.write(manifest_path(path));
  return kExitOk;
}

std::string table_row(const std::string& label, const EvalReport& r) {
  return label + "," + format_number(r.mrr) + "," + format_number(r.sp_test1) + "," + format_number(r.eo_test1) +
         "," + format_number(r.sp_test2) + "," + format_number(r.eo_test2) + "," + (r.complete ? "true" : "false") +
         "\n";
}

json report_json(const EvalReport& r) { return json::parse(r.to_json()); }

int cmd_ablate(const GraphOptions& o, const std::string& out_arg, std::ostream& err) {
  const Loaded l = load_inputs(o);
  const SensitiveConfig sensitive = require_sensitive(l);
  const fs::path dir = output_path(out_arg, "ablation");
  fs::create_directories(dir);
  std::string table = "mode,mrr,sp_test1,eo_test1,sp_test2,eo_test2,complete\n";
  json all = json::object();
  bool complete = true;
  Manifest m = manifest_for("ablate", l);
  for (FairMode mode : {FairMode::baseline, FairMode::sbm_only, FairMode::sbm_erp}) {
    RunSpec spec = run_spec(l, sensitive);
    spec.train.fair.mode = mode;
    const EvalReport r = repeat_and_aggregate(spec, spec.train.repetitions);
    const std::string name(to_string(mode));
    table += table_row(name, r);
    all[name] = report_json(r);
    complete = complete && r.complete;
    err << name << ": mrr " << format_number(r.mrr) << ", sp_test1 " << format_number(r.sp_test1) << ", eo_test1 "
        << format_number(r.eo_test1) << "\n";
  }
  const fs::path table_path = dir / "ablation.csv";
  const fs::path json_path = dir / "ablation.json";
  write_file_atomic(table_path, table);
  write_file_atomic(json_path, all.dump(2) + "\n");
  m.seeds = seed_range(l.config.train.seed, l.config.train.repetitions);
  m.outputs = {table_path.string(), json_path.string()};
  m.write(dir / "manifest.json");
  return complete ? kExitOk : kExitRuntime;
}

int cmd_sweep_mu(const GraphOptions& o, const std::vector<double>& values, const std::string& out_arg,
                 std::ostream& err) {
  const Loaded l = load_inputs(o);
  const SensitiveConfig sensitive = require_sensitive(l);
  if (values.empty()) throw UsageError("--values needs at least one mu");
  const fs::path dir = output_path(out_arg, "sweep_mu");
  fs::create_directories(dir);
  std::string table = "mu,mrr,sp_test1,eo_test1,sp_test2,eo_test2,complete\n";
  Manifest m = manifest_for("sweep-mu", l);
  bool complete = true;
  for (double mu : values) {
    RunSpec spec = run_spec(l, sensitive);
    spec.train.fair.mu = mu;
    spec.train.fair.validate();
    const EvalReport r = repeat_and_aggregate(spec, spec.train.repetitions);
    const fs::path report_path = dir / ("mu_" + format_number(mu) + ".json");
    write_file_atomic(report_path, r.to_json());
    m.outputs.push_back(report_path.string());
    table += table_row(format_number(mu), r);
    complete = complete && r.complete;
    err << "mu " << format_number(mu) << ": mrr " << format_number(r.mrr) << ", sp_test1 "
        << format_number(r.sp_test1) << ", eo_test1 " << format_number(r.eo_test1) << "\n";
  }
  const fs::path table_path = dir / "sweep.csv";
  write_file_atomic(table_path, table);
  m.outputs.push_back(table_path.string());
  m.seeds = seed_range(l.config.train.seed, l.config.train.repetitions);
  m.write(dir / "manifest.json");
  return complete ? kExitOk : kExitRuntime;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fairness-regularised knowledge-graph embeddings", "fairkg"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  GraphOptions ingest_opts, train_opts, eval_opts, audit_opts, ablate_opts, sweep_opts;
  std::string ingest_out, train_out, train_history, eval_out, eval_ckpt, audit_out, audit_ckpt, ablate_out,
      sweep_out;
  SynthArgs synth;
  std::vector<double> mu_values{0.3, 0.5, 0.7, 1.0};

  auto* ingest = app.add_subcommand("ingest", "Load a triple file and print statistics");
  add_graph_options(*ingest, ingest_opts);
  ingest->add_option("--out", ingest_out, "Write the deduplicated triples here");

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic biased graph");
  synth_cmd->add_option("--bridges", synth.bridges, "Number of bridge (person) entities")->check(CLI::Range(2, 10000000));
  synth_cmd->add_option("--bias", synth.bias, "Share of bridges linked to the first sensitive entity")
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--nonsensitive", synth.nonsensitive, "Number of non-sensitive entities")
      ->check(CLI::Range(1, 1000000));
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");
  synth_cmd->add_option("--coupling", synth.coupling, "Sensitive / non-sensitive coupling")
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--out", synth.out, "Triple file to write");
  synth_cmd->add_option("--sensitive-out", synth.sensitive_out, "Sensitive config file to write");

  auto* train_cmd = app.add_subcommand("train", "Train one model and write a checkpoint");
  add_graph_options(*train_cmd, train_opts);
  train_cmd->add_option("--out", train_out, "Checkpoint path");
  train_cmd->add_option("--history", train_history, "Per-epoch history CSV path");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint, or train and evaluate repeatedly");
  add_graph_options(*eval_cmd, eval_opts);
  eval_cmd->add_option("--checkpoint", eval_ckpt, "Checkpoint to evaluate");
  eval_cmd->add_option("--out", eval_out, "EvalReport JSON path (stdout when omitted)");

  auto* audit_cmd = app.add_subcommand("audit", "Export inclination scores as CSV");
  add_graph_options(*audit_cmd, audit_opts);
  audit_cmd->add_option("--checkpoint", audit_ckpt, "Checkpoint to audit (fresh initialisation when omitted)");
  audit_cmd->add_option("--out", audit_out, "CSV path (stdout when omitted)");

  auto* ablate_cmd = app.add_subcommand("ablate", "Compare baseline, sbm_only and sbm_erp");
  add_graph_options(*ablate_cmd, ablate_opts);
  ablate_cmd->add_option("--out", ablate_out, "Output directory");

  auto* sweep_cmd = app.add_subcommand("sweep-mu", "Evaluate a list of mu values");
  add_graph_options(*sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--values", mu_values, "Comma-separated mu values")->delimiter(',');
  sweep_cmd->add_option("--out", sweep_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_opts, ingest_out, out);
    if (*synth_cmd) return cmd_synth(synth, err);
    if (*train_cmd) return cmd_train(train_opts, train_out, train_history, err);
    if (*eval_cmd) return cmd_eval(eval_opts, eval_ckpt, eval_out, out);
    if (*audit_cmd) return cmd_audit(audit_opts, audit_ckpt, audit_out, out);
    if (*ablate_cmd) return cmd_ablate(ablate_opts, ablate_out, err);
    if (*sweep_cmd) return cmd_sweep_mu(sweep_opts, mu_values, sweep_out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace fairkg::cli
