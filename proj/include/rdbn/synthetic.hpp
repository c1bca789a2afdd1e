#pragma once

#include "rdbn/data_pipeline.hpp"
#include "rdbn/linear_gaussian.hpp"
#include "rdbn/structure_search.hpp"
#include "rdbn/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rdbn {

/// Ground-truth generator description: a network plus sampling knobs.
struct ScenarioSpec {
  std::string name;
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  std::vector<LinearGaussianNode> node_models;  // aligned with labels
  long n = 100;
  double missing_rate = 0.0;
  std::uint64_t seed = 0;
};

FittedNetwork scenario_truth(const ScenarioSpec& spec);
std::string scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const std::string& text);

/// n rows sampled in topological order: intercept + coefficients . parents
/// + Gaussian noise. Bit-identical for a fixed seed.
DataTable generate_from_network(const FittedNetwork& truth, long n, std::uint64_t seed);

/// Masks each predictor cell independently with probability `rate`; the
/// outcome column is never masked. Rows losing every predictor are redrawn
/// (at most 100 times each).
MergedDataset apply_mcar(const DataTable& data, double rate, std::uint64_t seed,
                         const std::string& outcome = "Y");

struct ScoredDag {
  std::vector<Edge> edges;
  double score = 0.0;
};

struct EnumerationResult {
  Dag best;
  double best_score = 0.0;
  std::vector<ScoredDag> all;  // every admissible DAG, for audit
};

/// Exhaustive scoring of every DAG admissible under the constraints.
/// Capped at 4 variables (543 DAGs); 5 (29281) behind allow_five.
EnumerationResult enumerate_dags(const DataTable& data,
                                 const EdgeConstraintSet& constraints, int jobs = 1,
                                 bool allow_five = false);

/// Year-on-year investment chain feeding the outcome: X1997 -> ... ->
/// X2005 with slope 0.95, X2005 -> Y with slope 25 and intercept 192,
/// outcome noise set for R^2 around 0.35. Later years are independent.
ScenarioSpec study_mimic_scenario(long n = 57);

}  // namespace rdbn
