#include "rdbn/cli.hpp"

#include "rdbn/analysis.hpp"
#include "rdbn/bootstrap.hpp"
#include "rdbn/csv.hpp"
#include "rdbn/imputation.hpp"
#include "rdbn/manifest.hpp"
#include "rdbn/rng.hpp"
#include "rdbn/synthetic.hpp"
#include "rdbn/warnings.hpp"

#include <json.hpp>

#include <filesystem>
#include <random>
#include <string>

namespace rdbn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t resolve_seed(const CommonOptions& common, bool randomized) {
  if (common.seed_provided || !randomized) return common.seed;
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

fs::path resolve_out_dir(const CommonOptions& common) {
  if (!common.out_dir.empty()) return common.out_dir;
  if (const char* env = std::getenv("RDBN_OUT_DIR")) return env;
  return "rdbn-out";
}

struct Emitter {
  fs::path dir;
  RunManifest manifest;

  explicit Emitter(const fs::path& out_dir) : dir(out_dir) {
    fs::create_directories(dir);
  }

  void input(const std::string& path) {
    manifest.input_digests[path] = digest_file(path);
  }

  void emit(const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    manifest.outputs.push_back(name);
  }

  void finish() {
    manifest.created_utc = utc_timestamp();
    write_manifest(dir, manifest);
  }
};

fs::path sidecar_path(const fs::path& csv_path) {
  fs::path p = csv_path;
  p.replace_extension(".json");
  return p;
}

SearchConfig search_config(int restarts, int perturbation, long max_iterations,
                           std::uint64_t seed) {
  SearchConfig config;
  config.restarts = restarts;
  config.perturbation = perturbation;
  config.max_iterations = max_iterations;
  config.seed = seed;
  return config;
}

json common_flags(const CommonOptions& common, std::uint64_t seed) {
  return json{{"out", common.out_dir}, {"seed", seed}, {"jobs", common.jobs}};
}

std::string learn_json(const Dag& dag, double score) {
  json doc = json::parse(dag_to_json(dag));
  doc["score"] = score;
  return doc.dump(2);
}

std::string consensus_json(const Dag& dag, double threshold,
                           const std::vector<Edge>& skipped) {
  json doc = json::parse(dag_to_json(dag));
  doc["threshold"] = threshold;
  json skipped_list = json::array();
  for (const Edge& e : skipped)
    skipped_list.push_back({{"parent", e.parent}, {"child", e.child}});
  doc["skipped_edges"] = skipped_list;
  return doc.dump(2);
}

std::string missingness_json(const MergedDataset& dataset) {
  MissingnessSummary summary = missingness_summary(dataset);
  json doc;
  doc["total"] = summary.total;
  doc["cell_universe"] = dataset.cell_universe();
  doc["per_column"] = summary.per_column;
  doc["per_country"] = summary.per_country;
  return doc.dump(2);
}

std::string search_trace_jsonl(const std::vector<SearchMove>& moves) {
  std::string out;
  for (const SearchMove& move : moves) {
    json line{{"iteration", move.iteration}, {"move", move.op},
              {"parent", move.parent},       {"child", move.child},
              {"delta", move.delta},         {"score", move.score}};
    out += line.dump() + "\n";
  }
  return out;
}

IngestOptions ingest_from_flags(const json& flags) {
  IngestOptions o;
  o.scores_path = flags.at("scores");
  o.indicators_path = flags.at("indicators");
  o.subject = flags.at("subject");
  return o;
}

ImputeOptions impute_from_flags(const json& flags) {
  ImputeOptions o;
  o.merged_path = flags.at("merged");
  o.mode = flags.at("mode");
  o.iterations = flags.at("iters");
  o.mask_size = flags.at("mask-size");
  o.neighbors = flags.at("k");
  return o;
}

LearnOptions learn_from_flags(const json& flags) {
  LearnOptions o;
  o.completed_path = flags.at("completed");
  o.restarts = flags.at("restarts");
  o.perturbation = flags.at("perturbation");
  o.max_iterations = flags.at("max-iterations");
  o.trace = flags.at("trace");
  return o;
}

BootstrapOptions bootstrap_from_flags(const json& flags) {
  BootstrapOptions o;
  o.completed_path = flags.at("completed");
  o.replicates = flags.at("replicates");
  o.threshold = flags.at("threshold");
  o.restarts = flags.at("restarts");
  o.perturbation = flags.at("perturbation");
  o.max_iterations = flags.at("max-iterations");
  return o;
}

AnalyzeOptions analyze_from_flags(const json& flags) {
  AnalyzeOptions o;
  o.completed_path = flags.at("completed");
  o.consensus_path = flags.at("consensus");
  o.strengths_path = flags.at("strengths");
  o.path_source = flags.at("path-source");
  return o;
}

SimulateOptions simulate_from_flags(const json& flags) {
  SimulateOptions o;
  o.scenario_path = flags.at("scenario");
  o.builtin = flags.at("builtin");
  o.n = flags.at("n");
  o.n_provided = flags.at("n-provided");
  o.missing_rate = flags.at("missing-rate");
  o.rate_provided = flags.at("rate-provided");
  return o;
}

PipelineOptions pipeline_from_flags(const json& flags) {
  PipelineOptions o;
  o.ingest = ingest_from_flags(flags.at("ingest"));
  o.impute = impute_from_flags(flags.at("impute"));
  o.bootstrap = bootstrap_from_flags(flags.at("bootstrap"));
  o.path_source = flags.at("path-source");
  return o;
}

json ingest_flags(const IngestOptions& o) {
  return json{{"scores", o.scores_path},
              {"indicators", o.indicators_path},
              {"subject", o.subject}};
}

json impute_flags(const ImputeOptions& o) {
  return json{{"merged", o.merged_path},
              {"mode", o.mode},
              {"iters", o.iterations},
              {"mask-size", o.mask_size},
              {"k", o.neighbors}};
}

json learn_flags(const LearnOptions& o) {
  return json{{"completed", o.completed_path},
              {"restarts", o.restarts},
              {"perturbation", o.perturbation},
              {"max-iterations", o.max_iterations},
              {"trace", o.trace}};
}

json bootstrap_flags(const BootstrapOptions& o) {
  return json{{"completed", o.completed_path}, {"replicates", o.replicates},
              {"threshold", o.threshold},      {"restarts", o.restarts},
              {"perturbation", o.perturbation}, {"max-iterations", o.max_iterations}};
}

json analyze_flags(const AnalyzeOptions& o) {
  return json{{"completed", o.completed_path},
              {"consensus", o.consensus_path},
              {"strengths", o.strengths_path},
              {"path-source", o.path_source}};
}

json simulate_flags(const SimulateOptions& o) {
  return json{{"scenario", o.scenario_path}, {"builtin", o.builtin},
              {"n", o.n},                    {"n-provided", o.n_provided},
              {"missing-rate", o.missing_rate}, {"rate-provided", o.rate_provided}};
}

json pipeline_flags(const PipelineOptions& o) {
  return json{{"ingest", ingest_flags(o.ingest)},
              {"impute", impute_flags(o.impute)},
              {"bootstrap", bootstrap_flags(o.bootstrap)},
              {"path-source", o.path_source}};
}

double resolve_threshold(const std::string& text, const EdgeStrengthTable& strengths,
                         const std::string& outcome) {
  if (text == "max-outcome") {
    auto strongest = strongest_edge_to_outcome(strengths, outcome);
    if (!strongest)
      throw NumericError("threshold max-outcome: no edge into " + outcome);
    return strongest->second;
  }
  double value = csv::parse_double(text, 0, "threshold");
  if (!(value > 0.0) || value > 1.0)
    throw ValidationError("threshold must lie in (0, 1]");
  return value;
}

}  // namespace

MergedDataset load_merged(const fs::path& csv_path) {
  std::string subject = "unknown";
  fs::path sidecar = sidecar_path(csv_path);
  if (fs::exists(sidecar)) {
    try {
      json doc = json::parse(read_file(sidecar));
      subject = doc.value("subject", subject);
    } catch (const json::parse_error&) {
      warn("unreadable sidecar " + sidecar.string() + "; subject unknown");
    }
  } else {
    warn("no sidecar next to " + csv_path.string() + "; subject unknown");
  }
  return merged_from_csv(read_file(csv_path), subject);
}

void run_ingest(const IngestOptions& options, const CommonOptions& common) {
  std::uint64_t seed = resolve_seed(common, false);
  Emitter emitter(resolve_out_dir(common));
  emitter.manifest.command = "ingest";
  emitter.manifest.seed = seed;
  emitter.manifest.jobs = common.jobs;
  emitter.manifest.flags = ingest_flags(options);
  emitter.manifest.flags["common"] = common_flags(common, seed);
  emitter.input(options.scores_path);
  emitter.input(options.indicators_path);

  Subject subject = parse_subject(options.subject);
  ScoreTable scores = read_score_csv(read_file(options.scores_path));
  IndicatorTable indicators = read_indicator_csv(read_file(options.indicators_path));
  MergedDataset merged = merge(scores, indicators, subject);

  emitter.emit("merged.csv", merged_to_csv(merged));
  emitter.emit("merged.json", merged_sidecar_json(merged));
  emitter.emit("missingness.json", missingness_json(merged));
  emitter.finish();
}

void run_impute(const ImputeOptions& options, const CommonOptions& common) {
  std::uint64_t seed = resolve_seed(common, true);
  Emitter emitter(resolve_out_dir(common));
  emitter.manifest.command = "impute";
  emitter.manifest.seed = seed;
  emitter.manifest.jobs = common.jobs;
  emitter.manifest.flags = impute_flags(options);
  emitter.manifest.flags["common"] = common_flags(common, seed);
  emitter.input(options.merged_path);

  MergedDataset merged = load_merged(options.merged_path);
  ImputationConfig config;
  config.iterations = options.iterations;
  config.mask_count = options.mask_size;
  config.neighbors = options.neighbors;
  config.seed = seed;
  config.mode = parse_imputation_mode(options.mode);
  BniiResult result = bnii(merged, config);

  emitter.emit("completed.csv", merged_to_csv(result.completed));
  emitter.emit("completed.json", merged_sidecar_json(result.completed));
  emitter.emit("trace.csv", trace_to_csv(result.trace));
  emitter.emit("impute_summary.json", trace_summary_json(result.trace, config));
  emitter.finish();
}

void run_learn(const LearnOptions& options, const CommonOptions& common) {
  std::uint64_t seed = resolve_seed(common, true);
  Emitter emitter(resolve_out_dir(common));
  emitter.manifest.command = "learn";
  emitter.manifest.seed = seed;
  emitter.manifest.jobs = common.jobs;
  emitter.manifest.flags = learn_flags(options);
  emitter.manifest.flags["common"] = common_flags(common, seed);
  emitter.input(options.completed_path);

  MergedDataset completed = load_merged(options.completed_path);
  DataTable table = completed.table();
  EdgeConstraintSet constraints =
      temporal_blacklist_from_labels(table.columns, table.columns[0]);
  SearchConfig config = search_config(options.restarts, options.perturbation,
                                      options.max_iterations, seed);

  std::vector<SearchMove> moves;
  SearchResult result =
      hill_climb(table, constraints, config, options.trace ? &moves : nullptr);

  DotOptions dot;
  dot.outcome_node = table.columns[0];
  dot.outcome_label = subject_display(completed.subject());
  emitter.emit("dag.dot", to_dot(result.dag, dot));
  emitter.emit("dag.json", learn_json(result.dag, result.score));
  if (options.trace) emitter.emit("search_trace.jsonl", search_trace_jsonl(moves));
  emitter.finish();
}

void run_bootstrap(const BootstrapOptions& options, const CommonOptions& common) {
  std::uint64_t seed = resolve_seed(common, true);
  Emitter emitter(resolve_out_dir(common));
  emitter.manifest.command = "bootstrap";
  emitter.manifest.seed = seed;
  emitter.manifest.jobs = common.jobs;
  emitter.manifest.flags = bootstrap_flags(options);
  emitter.manifest.flags["common"] = common_flags(common, seed);
  emitter.input(options.completed_path);

  MergedDataset completed = load_merged(options.completed_path);
  DataTable table = completed.table();
  EdgeConstraintSet constraints =
      temporal_blacklist_from_labels(table.columns, table.columns[0]);
  SearchConfig config = search_config(options.restarts, options.perturbation,
                                      options.max_iterations, mix_seed(seed, 0x11));

  EdgeStrengthTable strengths = bootstrap_strength(table, constraints, config,
                                                   options.replicates, seed, common.jobs);
  double threshold = resolve_threshold(options.threshold, strengths, table.columns[0]);
  std::vector<Edge> skipped;
  Dag consensus = average_network(strengths, threshold, &skipped);

  DotOptions dot;
  dot.outcome_node = table.columns[0];
  dot.outcome_label = subject_display(completed.subject());
  for (const Edge& e : consensus.edges())
    dot.edge_labels[{e.parent, e.child}] = strengths.at(e.parent, e.child);

  emitter.emit("strengths.csv", strengths_to_csv(strengths));
  emitter.emit("strengths.json", strengths_to_json(strengths));
  emitter.emit("consensus.dot", to_dot(consensus, dot));
  emitter.emit("consensus.json", consensus_json(consensus, threshold, skipped));
  emitter.finish();
}

void run_analyze(const AnalyzeOptions& options, const CommonOptions& common) {
  std::uint64_t seed = resolve_seed(common, false);
  Emitter emitter(resolve_out_dir(common));
  emitter.manifest.command = "analyze";
  emitter.manifest.seed = seed;
  emitter.manifest.jobs = common.jobs;
  emitter.manifest.flags = analyze_flags(options);
  emitter.manifest.flags["common"] = common_flags(common, seed);
  emitter.input(options.completed_path);
  emitter.input(options.consensus_path);
  emitter.input(options.strengths_path);

  MergedDataset completed = load_merged(options.completed_path);
  DataTable table = completed.table();
  Dag consensus = dag_from_json(read_file(options.consensus_path));
  EdgeStrengthTable strengths = strengths_from_csv(read_file(options.strengths_path));

  FittedNetwork net = fit_network(consensus, table);
  AnalysisReport report = build_report(net, strengths, completed);

  const std::string outcome = table.columns[0];
  std::string source = options.path_source.empty() ? table.columns[1] : options.path_source;
  report.path = extract_path(consensus, source, outcome);
  if (!report.path) warn("no path from " + source + " to " + outcome);

  RegressionTable regressions = report.path
                                    ? regression_table(net, *report.path)
                                    : regression_table_for(net, {outcome});

  emitter.emit("network.json", network_to_json(net));
  emitter.emit("regression_table.txt", regression_table_to_text(regressions));
  emitter.emit("regression_table.csv", regression_table_to_csv(regressions));
  emitter.emit("report.csv", report_to_csv(report));
  emitter.emit("report.json", report_to_json(report));
  emitter.emit("correlations.csv",
               correlations_to_csv(outcome_correlations(table, outcome)));
  emitter.finish();
}

void run_simulate(const SimulateOptions& options, const CommonOptions& common) {
  std::uint64_t seed = resolve_seed(common, true);
  Emitter emitter(resolve_out_dir(common));
  emitter.manifest.command = "simulate";
  emitter.manifest.seed = seed;
  emitter.manifest.jobs = common.jobs;
  emitter.manifest.flags = simulate_flags(options);
  emitter.manifest.flags["common"] = common_flags(common, seed);

  ScenarioSpec spec;
  if (!options.scenario_path.empty()) {
    emitter.input(options.scenario_path);
    spec = scenario_from_json(read_file(options.scenario_path));
  } else if (options.builtin == "study-mimic") {
    spec = study_mimic_scenario();
  } else {
    throw ValidationError("simulate needs --scenario FILE or --builtin study-mimic");
  }
  if (options.n_provided) spec.n = options.n;
  if (options.rate_provided) spec.missing_rate = options.missing_rate;
  spec.seed = seed;
  if (spec.n < 2) throw ValidationError("scenario needs n >= 2");

  FittedNetwork truth = scenario_truth(spec);
  DataTable data = generate_from_network(truth, spec.n, spec.seed);
  MergedDataset dataset =
      apply_mcar(data, spec.missing_rate, mix_seed(spec.seed, 1), spec.labels[0]);

  DotOptions dot;
  dot.outcome_node = spec.labels[0];
  emitter.emit("dataset.csv", merged_to_csv(dataset));
  emitter.emit("dataset.json", merged_sidecar_json(dataset));
  emitter.emit("truth.json", scenario_to_json(spec));
  emitter.emit("truth.dot", to_dot(truth.dag, dot));
  emitter.finish();
}

void run_pipeline(const PipelineOptions& options, const CommonOptions& common) {
  std::uint64_t seed = resolve_seed(common, true);
  fs::path root = resolve_out_dir(common);
  Emitter emitter(root);
  emitter.manifest.command = "pipeline";
  emitter.manifest.seed = seed;
  emitter.manifest.jobs = common.jobs;
  emitter.manifest.flags = pipeline_flags(options);
  emitter.manifest.flags["common"] = common_flags(common, seed);
  emitter.input(options.ingest.scores_path);
  emitter.input(options.ingest.indicators_path);

  // Each stage re-runs exactly as the standalone command with this seed.
  CommonOptions stage = common;
  stage.seed = seed;
  stage.seed_provided = true;

  stage.out_dir = (root / "ingest").string();
  run_ingest(options.ingest, stage);

  ImputeOptions impute = options.impute;
  impute.merged_path = (root / "ingest" / "merged.csv").string();
  stage.out_dir = (root / "impute").string();
  run_impute(impute, stage);

  BootstrapOptions bootstrap = options.bootstrap;
  bootstrap.completed_path = (root / "impute" / "completed.csv").string();
  stage.out_dir = (root / "bootstrap").string();
  run_bootstrap(bootstrap, stage);

  AnalyzeOptions analyze;
  analyze.completed_path = (root / "impute" / "completed.csv").string();
  analyze.consensus_path = (root / "bootstrap" / "consensus.json").string();
  analyze.strengths_path = (root / "bootstrap" / "strengths.csv").string();
  analyze.path_source = options.path_source;
  stage.out_dir = (root / "analyze").string();
  run_analyze(analyze, stage);

  emitter.finish();
}

void run_replay(const std::string& manifest_path, const std::string& out_dir, int jobs) {
  RunManifest manifest = read_manifest(manifest_path);
  CommonOptions common;
  common.out_dir = out_dir;
  common.seed = manifest.seed;
  common.seed_provided = true;
  common.jobs = jobs > 0 ? jobs : manifest.jobs;

  const json& flags = manifest.flags;
  if (manifest.command == "ingest") {
    run_ingest(ingest_from_flags(flags), common);
  } else if (manifest.command == "impute") {
    run_impute(impute_from_flags(flags), common);
  } else if (manifest.command == "learn") {
    run_learn(learn_from_flags(flags), common);
  } else if (manifest.command == "bootstrap") {
    run_bootstrap(bootstrap_from_flags(flags), common);
  } else if (manifest.command == "analyze") {
    run_analyze(analyze_from_flags(flags), common);
  } else if (manifest.command == "simulate") {
    run_simulate(simulate_from_flags(flags), common);
  } else if (manifest.command == "pipeline") {
    run_pipeline(pipeline_from_flags(flags), common);
  } else {
    throw ValidationError("manifest records unknown command '" + manifest.command + "'");
  }
}

}  // namespace rdbn::cli
