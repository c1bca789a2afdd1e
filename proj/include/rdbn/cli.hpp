#pragma once

#include "rdbn/data_pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace rdbn::cli {

/// Options shared by every command. When no seed is given one is drawn
/// and recorded in the manifest, so any run can be replayed.
struct CommonOptions {
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_provided = false;
  int jobs = 1;
};

struct IngestOptions {
  std::string scores_path;
  std::string indicators_path;
  std::string subject = "reading";
};

struct ImputeOptions {
  std::string merged_path;
  std::string mode = "sweep";
  long iterations = 500;
  int mask_size = 50;
  int neighbors = 10;
};

struct LearnOptions {
  std::string completed_path;
  int restarts = 10;
  int perturbation = 4;
  long max_iterations = 10000;
  bool trace = false;
};

struct BootstrapOptions {
  std::string completed_path;
  int replicates = 500;
  std::string threshold = "0.6";  // fraction or "max-outcome"
  int restarts = 10;
  int perturbation = 4;
  long max_iterations = 10000;
};

struct AnalyzeOptions {
  std::string completed_path;
  std::string consensus_path;
  std::string strengths_path;
  std::string path_source;  // empty: first predictor column
};

struct SimulateOptions {
  std::string scenario_path;  // scenario JSON, or
  std::string builtin;        // "study-mimic"
  long n = 0;
  bool n_provided = false;
  double missing_rate = 0.0;
  bool rate_provided = false;
};

struct PipelineOptions {
  IngestOptions ingest;
  ImputeOptions impute;      // merged_path ignored (wired internally)
  BootstrapOptions bootstrap;  // completed_path ignored
  std::string path_source;
};

void run_ingest(const IngestOptions& options, const CommonOptions& common);
void run_impute(const ImputeOptions& options, const CommonOptions& common);
void run_learn(const LearnOptions& options, const CommonOptions& common);
void run_bootstrap(const BootstrapOptions& options, const CommonOptions& common);
void run_analyze(const AnalyzeOptions& options, const CommonOptions& common);
void run_simulate(const SimulateOptions& options, const CommonOptions& common);
void run_pipeline(const PipelineOptions& options, const CommonOptions& common);

/// Re-executes the command recorded in a manifest into a fresh directory.
void run_replay(const std::string& manifest_path, const std::string& out_dir,
                int jobs = 0 /* 0: use recorded value */);

/// Loads a merged/completed CSV with its sidecar (subject tag) when present.
MergedDataset load_merged(const std::filesystem::path& csv_path);

}  // namespace rdbn::cli
