// Command-line driver for the rdbn toolkit. Flag parsing only; the work
// happens in rdbn::cli.

#include "rdbn/cli.hpp"
#include "rdbn/manifest.hpp"
#include "rdbn/types.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace {

struct SeedCapture {
  std::uint64_t value = 0;
  bool provided = false;
};

void add_common(CLI::App* cmd, rdbn::cli::CommonOptions& common, SeedCapture& seed) {
  cmd->add_option("--out", common.out_dir,
                  "Output directory (default $RDBN_OUT_DIR or ./rdbn-out)");
  cmd->add_option("--seed", seed.value, "Master seed (drawn and recorded when omitted)")
      ->each([&seed](const std::string&) { seed.provided = true; });
  cmd->add_option("--jobs", common.jobs, "Worker threads for parallel stages")
      ->check(CLI::Range(1, 256));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal Gaussian Bayesian networks for panel indicators"};
  app.set_version_flag("--version", std::string(rdbn::kToolVersion));
  app.require_subcommand(1);

  rdbn::cli::CommonOptions common;
  SeedCapture seed;

  rdbn::cli::IngestOptions ingest;
  CLI::App* ingest_cmd = app.add_subcommand(
      "ingest", "Merge score and indicator CSVs into the analysis matrix");
  ingest_cmd->add_option("--scores", ingest.scores_path, "Score CSV")->required();
  ingest_cmd->add_option("--indicators", ingest.indicators_path, "Indicator CSV")
      ->required();
  ingest_cmd->add_option("--subject", ingest.subject, "math|reading|science");
  add_common(ingest_cmd, common, seed);

  rdbn::cli::ImputeOptions impute;
  CLI::App* impute_cmd =
      app.add_subcommand("impute", "Complete missing cells (KNN seed + iterative BN)");
  impute_cmd->add_option("--merged", impute.merged_path, "Merged CSV")->required();
  impute_cmd->add_option("--mode", impute.mode, "sweep|faithful")
      ->check(CLI::IsMember({"sweep", "faithful"}));
  impute_cmd->add_option("--iters", impute.iterations, "Iteration budget N")
      ->check(CLI::NonNegativeNumber);
  impute_cmd->add_option("--mask-size", impute.mask_size,
                         "Observed cells re-hidden per iteration")
      ->check(CLI::NonNegativeNumber);
  impute_cmd->add_option("--k", impute.neighbors, "KNN neighbor count")
      ->check(CLI::PositiveNumber);
  add_common(impute_cmd, common, seed);

  rdbn::cli::LearnOptions learn;
  CLI::App* learn_cmd =
      app.add_subcommand("learn", "Hill-climb a single structure on completed data");
  learn_cmd->add_option("--completed", learn.completed_path, "Completed CSV")->required();
  learn_cmd->add_option("--restarts", learn.restarts, "Random restarts")
      ->check(CLI::NonNegativeNumber);
  learn_cmd->add_option("--perturbation", learn.perturbation,
                        "Edges toggled per restart")
      ->check(CLI::NonNegativeNumber);
  learn_cmd->add_option("--max-iterations", learn.max_iterations, "Move budget per climb")
      ->check(CLI::NonNegativeNumber);
  learn_cmd->add_flag("--trace", learn.trace, "Write search_trace.jsonl");
  add_common(learn_cmd, common, seed);

  rdbn::cli::BootstrapOptions bootstrap;
  CLI::App* bootstrap_cmd = app.add_subcommand(
      "bootstrap", "Edge strengths by row resampling and the consensus graph");
  bootstrap_cmd->add_option("--completed", bootstrap.completed_path, "Completed CSV")
      ->required();
  bootstrap_cmd->add_option("--replicates", bootstrap.replicates, "Bootstrap replicates")
      ->check(CLI::PositiveNumber);
  bootstrap_cmd->add_option("--threshold", bootstrap.threshold,
                            "Strength threshold in (0,1], or max-outcome");
  bootstrap_cmd->add_option("--restarts", bootstrap.restarts, "Restarts per replicate")
      ->check(CLI::NonNegativeNumber);
  bootstrap_cmd->add_option("--perturbation", bootstrap.perturbation,
                            "Edges toggled per restart")
      ->check(CLI::NonNegativeNumber);
  bootstrap_cmd
      ->add_option("--max-iterations", bootstrap.max_iterations, "Move budget per climb")
      ->check(CLI::NonNegativeNumber);
  add_common(bootstrap_cmd, common, seed);

  rdbn::cli::AnalyzeOptions analyze;
  CLI::App* analyze_cmd = app.add_subcommand(
      "analyze", "Regression table, indexes and correlations from a consensus graph");
  analyze_cmd->add_option("--completed", analyze.completed_path, "Completed CSV")
      ->required();
  analyze_cmd->add_option("--consensus", analyze.consensus_path, "Consensus JSON")
      ->required();
  analyze_cmd->add_option("--strengths", analyze.strengths_path, "Strengths CSV")
      ->required();
  analyze_cmd->add_option("--path-source", analyze.path_source,
                          "Path start node (default: first predictor)");
  add_common(analyze_cmd, common, seed);

  rdbn::cli::SimulateOptions simulate;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Generate a dataset from a known network");
  simulate_cmd->add_option("--scenario", simulate.scenario_path, "Scenario JSON");
  simulate_cmd->add_option("--builtin", simulate.builtin, "Built-in scenario name")
      ->check(CLI::IsMember({"study-mimic"}));
  simulate_cmd->add_option("--n", simulate.n, "Sample size")
      ->each([&simulate](const std::string&) { simulate.n_provided = true; })
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--missing-rate", simulate.missing_rate, "MCAR rate in [0,1)")
      ->each([&simulate](const std::string&) { simulate.rate_provided = true; })
      ->check(CLI::Range(0.0, 0.999999));
  add_common(simulate_cmd, common, seed);

  rdbn::cli::PipelineOptions pipeline;
  CLI::App* pipeline_cmd = app.add_subcommand(
      "pipeline", "ingest -> impute -> bootstrap -> analyze in one run");
  pipeline_cmd->add_option("--scores", pipeline.ingest.scores_path, "Score CSV")
      ->required();
  pipeline_cmd->add_option("--indicators", pipeline.ingest.indicators_path,
                           "Indicator CSV")
      ->required();
  pipeline_cmd->add_option("--subject", pipeline.ingest.subject, "math|reading|science");
  pipeline_cmd->add_option("--mode", pipeline.impute.mode, "sweep|faithful")
      ->check(CLI::IsMember({"sweep", "faithful"}));
  pipeline_cmd->add_option("--iters", pipeline.impute.iterations, "Imputation budget")
      ->check(CLI::NonNegativeNumber);
  pipeline_cmd->add_option("--mask-size", pipeline.impute.mask_size,
                           "Cells re-hidden per iteration")
      ->check(CLI::NonNegativeNumber);
  pipeline_cmd->add_option("--k", pipeline.impute.neighbors, "KNN neighbor count")
      ->check(CLI::PositiveNumber);
  pipeline_cmd
      ->add_option("--replicates", pipeline.bootstrap.replicates, "Bootstrap replicates")
      ->check(CLI::PositiveNumber);
  pipeline_cmd->add_option("--threshold", pipeline.bootstrap.threshold,
                           "Strength threshold in (0,1], or max-outcome");
  pipeline_cmd->add_option("--restarts", pipeline.bootstrap.restarts,
                           "Restarts per climb")
      ->check(CLI::NonNegativeNumber);
  pipeline_cmd->add_option("--path-source", pipeline.path_source, "Path start node");
  add_common(pipeline_cmd, common, seed);

  std::string replay_manifest;
  std::string replay_out;
  int replay_jobs = 0;
  CLI::App* replay_cmd =
      app.add_subcommand("replay", "Re-execute a recorded run from its manifest");
  replay_cmd->add_option("manifest", replay_manifest, "manifest.json path")->required();
  replay_cmd->add_option("--out", replay_out, "Output directory")->required();
  replay_cmd->add_option("--jobs", replay_jobs, "Override recorded job count")
      ->check(CLI::Range(1, 256));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  common.seed = seed.value;
  common.seed_provided = seed.provided;

  try {
    if (ingest_cmd->parsed()) {
      rdbn::cli::run_ingest(ingest, common);
    } else if (impute_cmd->parsed()) {
      rdbn::cli::run_impute(impute, common);
    } else if (learn_cmd->parsed()) {
      rdbn::cli::run_learn(learn, common);
    } else if (bootstrap_cmd->parsed()) {
      rdbn::cli::run_bootstrap(bootstrap, common);
    } else if (analyze_cmd->parsed()) {
      rdbn::cli::run_analyze(analyze, common);
    } else if (simulate_cmd->parsed()) {
      rdbn::cli::run_simulate(simulate, common);
    } else if (pipeline_cmd->parsed()) {
      rdbn::cli::run_pipeline(pipeline, common);
    } else if (replay_cmd->parsed()) {
      rdbn::cli::run_replay(replay_manifest, replay_out, replay_jobs);
    }
  } catch (const rdbn::ValidationError& e) {
    std::cerr << "rdbn: " << e.what() << '\n';
    return 2;
  } catch (const rdbn::NumericError& e) {
    std::cerr << "rdbn: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "rdbn: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
