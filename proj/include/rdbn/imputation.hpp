#pragma once

#include "rdbn/data_pipeline.hpp"
#include "rdbn/structure_search.hpp"
#include "rdbn/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rdbn {

/// Predictor cell address in the merged matrix (col >= 1; col 0 is Y).
struct Cell {
  Index row;
  Index col;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Fills every missing predictor cell with the column median of the k rows
/// nearest under a scaled mean-squared difference over co-observed
/// predictor columns. Returns the full completed matrix (outcome column
/// untouched).
Matrix knn_impute(const MergedDataset& dataset, int k);

/// Uniform sample without replacement of m observed predictor cells
/// (disjoint from the dataset's missing set), in canonical order.
std::vector<Cell> mask_random_cells(const MergedDataset& dataset, int m,
                                    std::uint64_t seed);

/// Sum of squared differences over the index set.
double gap(const Matrix& original, const Matrix& imputed, const std::vector<Cell>& cells);

enum class ImputationMode { faithful, sweep };

ImputationMode parse_imputation_mode(const std::string& text);
std::string imputation_mode_name(ImputationMode mode);

struct ImputationConfig {
  long iterations = 500;  // N
  int mask_count = 50;    // cells re-hidden per iteration
  int neighbors = 10;     // KNN seed
  std::uint64_t seed = 0;
  ImputationMode mode = ImputationMode::sweep;
  /// Structure search used to re-estimate the network each iteration.
  SearchConfig search{.restarts = 2, .perturbation = 4, .max_iterations = 10000,
                      .seed = 0, .tie_tolerance = 1e-9};
};

struct TraceRow {
  long iteration = 0;
  double gap = 0.0;
  int masked = 0;
  bool accepted = false;
};

struct ImputationTrace {
  std::vector<TraceRow> rows;
  double best_gap = 0.0;
  long best_iteration = 0;  // rank of the minimum gap
  long final_iteration = 0;
  std::string mode;
};

struct BniiResult {
  MergedDataset completed;
  ImputationTrace trace;
};

/// Iterative network-based imputation. Starts from the KNN completion;
/// each iteration re-hides `mask_count` fresh observed cells, re-learns
/// the structure on the current completion, re-imputes every hidden cell
/// from the fitted joint (conditioning on the rest of the row) and scores
/// the squared gap on the re-hidden cells. faithful mode stops at the
/// first gap increase; sweep mode runs all N iterations and keeps the
/// completion with the smallest gap. Observed cells of the returned
/// dataset always carry their original values.
BniiResult bnii(const MergedDataset& dataset, const ImputationConfig& config);

std::string trace_to_csv(const ImputationTrace& trace);
std::string trace_summary_json(const ImputationTrace& trace, const ImputationConfig& config);

}  // namespace rdbn
