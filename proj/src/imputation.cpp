#include "rdbn/imputation.hpp"

#include "rdbn/csv.hpp"
#include "rdbn/joint_gaussian.hpp"
#include "rdbn/rng.hpp"
#include "rdbn/warnings.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace rdbn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string cell_name(const MergedDataset& d, const Cell& cell) {
  return d.countries()[static_cast<std::size_t>(cell.row)] + "/" +
         d.columns()[static_cast<std::size_t>(cell.col)];
}

/// Scaled mean squared difference over predictor columns observed in both
/// rows; infinity when the rows share no observed column.
double row_distance(const Matrix& values, const BoolMatrix& mask, Index a, Index b,
                    const Vector& scale) {
  double sum = 0.0;
  int shared = 0;
  for (Index c = 1; c < values.cols(); ++c) {
    if (mask(a, c) || mask(b, c)) continue;
    double diff = (values(a, c) - values(b, c)) / scale(c);
    sum += diff * diff;
    ++shared;
  }
  if (shared == 0) return kInf;
  return sum / static_cast<double>(shared);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  if (v.size() % 2 == 1) return v[mid];
  return (v[mid - 1] + v[mid]) / 2.0;
}

std::vector<Cell> observed_predictor_cells(const MergedDataset& d) {
  std::vector<Cell> cells;
  for (Index r = 0; r < d.n(); ++r) {
    for (Index c = 1; c < d.values().cols(); ++c) {
      if (!d.mask()(r, c)) cells.push_back({r, c});
    }
  }
  return cells;
}

std::vector<Cell> missing_predictor_cells(const MergedDataset& d) {
  std::vector<Cell> cells;
  for (Index r = 0; r < d.n(); ++r) {
    for (Index c = 1; c < d.values().cols(); ++c) {
      if (d.mask()(r, c)) cells.push_back({r, c});
    }
  }
  return cells;
}

/// Re-imputes the union of hidden cells row by row, conditioning each
/// row's hidden block on its remaining cells (outcome included).
Matrix impute_from_network(const MergedDataset& d, const JointGaussian& joint,
                           const std::vector<std::vector<Index>>& hidden_by_row) {
  Matrix result = d.values();
  for (Index r = 0; r < d.n(); ++r) {
    const auto& hidden = hidden_by_row[static_cast<std::size_t>(r)];
    if (hidden.empty()) continue;
    std::vector<int> targets(hidden.begin(), hidden.end());
    std::vector<int> observed;
    for (Index c = 0; c < d.values().cols(); ++c) {
      if (std::find(hidden.begin(), hidden.end(), c) == hidden.end() && !d.mask()(r, c))
        observed.push_back(static_cast<int>(c));
    }
    Vector observed_values(static_cast<Index>(observed.size()));
    for (std::size_t i = 0; i < observed.size(); ++i)
      observed_values(static_cast<Index>(i)) = d.values()(r, observed[i]);
    Vector filled = conditional_mean(joint, observed, observed_values, targets);
    for (std::size_t i = 0; i < targets.size(); ++i)
      result(r, targets[i]) = filled(static_cast<Index>(i));
  }
  return result;
}

}  // namespace

Matrix knn_impute(const MergedDataset& dataset, int k) {
  if (k < 1) throw ValidationError("k must be at least 1");
  const Matrix& values = dataset.values();
  const BoolMatrix& mask = dataset.mask();
  const Index n = values.rows();
  const Index cols = values.cols();

  for (Index r = 0; r < n; ++r) {
    bool any = false;
    for (Index c = 1; c < cols; ++c) any = any || !mask(r, c);
    if (!any)
      throw ValidationError("row " + dataset.countries()[static_cast<std::size_t>(r)] +
                            " has no observed predictor");
  }

  // Per-column standard deviation over observed cells; constant columns
  // fall back to unit scale.
  Vector scale = Vector::Ones(cols);
  for (Index c = 1; c < cols; ++c) {
    double sum = 0.0, sum2 = 0.0;
    long count = 0;
    for (Index r = 0; r < n; ++r) {
      if (mask(r, c)) continue;
      sum += values(r, c);
      sum2 += values(r, c) * values(r, c);
      ++count;
    }
    if (count > 1) {
      double mean = sum / static_cast<double>(count);
      double var = sum2 / static_cast<double>(count) - mean * mean;
      if (var > 0.0) scale(c) = std::sqrt(var);
    }
  }

  Matrix completed = values;
  for (Index r = 0; r < n; ++r) {
    for (Index c = 1; c < cols; ++c) {
      if (!mask(r, c)) continue;
      std::vector<std::pair<double, Index>> candidates;
      for (Index other = 0; other < n; ++other) {
        if (other == r || mask(other, c)) continue;
        double dist = row_distance(values, mask, r, other, scale);
        if (std::isfinite(dist)) candidates.emplace_back(dist, other);
      }
      if (candidates.empty())
        throw NumericError("no neighbor can fill cell " + cell_name(dataset, {r, c}));
      if (static_cast<int>(candidates.size()) < k)
        warn("cell " + cell_name(dataset, {r, c}) + ": only " +
             std::to_string(candidates.size()) + " neighbors available (k=" +
             std::to_string(k) + ")");
      std::sort(candidates.begin(), candidates.end());
      const std::size_t take = std::min<std::size_t>(candidates.size(),
                                                     static_cast<std::size_t>(k));
      std::vector<double> neighbor_values;
      neighbor_values.reserve(take);
      for (std::size_t i = 0; i < take; ++i)
        neighbor_values.push_back(values(candidates[i].second, c));
      completed(r, c) = median(std::move(neighbor_values));
    }
  }
  return completed;
}

std::vector<Cell> mask_random_cells(const MergedDataset& dataset, int m,
                                    std::uint64_t seed) {
  if (m < 0) throw ValidationError("mask count must be nonnegative");
  std::vector<Cell> pool = observed_predictor_cells(dataset);
  if (static_cast<std::size_t>(m) > pool.size())
    throw ValidationError("cannot mask " + std::to_string(m) + " cells: only " +
                          std::to_string(pool.size()) + " observed predictor cells");
  Rng rng = make_rng(seed);
  // Partial Fisher-Yates: the first m slots become the sample.
  for (int i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i),
                                                    pool.size() - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[pick(rng)]);
  }
  pool.resize(static_cast<std::size_t>(m));
  std::sort(pool.begin(), pool.end());
  return pool;
}

double gap(const Matrix& original, const Matrix& imputed, const std::vector<Cell>& cells) {
  if (original.rows() != imputed.rows() || original.cols() != imputed.cols())
    throw ValidationError("gap: matrix shapes differ");
  double sum = 0.0;
  for (const Cell& cell : cells) {
    double diff = original(cell.row, cell.col) - imputed(cell.row, cell.col);
    sum += diff * diff;
  }
  return sum;
}

ImputationMode parse_imputation_mode(const std::string& text) {
  if (text == "faithful") return ImputationMode::faithful;
  if (text == "sweep") return ImputationMode::sweep;
  throw ValidationError("unknown mode '" + text + "' (expected faithful|sweep)");
}

std::string imputation_mode_name(ImputationMode mode) {
  return mode == ImputationMode::faithful ? "faithful" : "sweep";
}

BniiResult bnii(const MergedDataset& dataset, const ImputationConfig& config) {
  ImputationTrace trace;
  trace.mode = imputation_mode_name(config.mode);

  const std::vector<Cell> missing = missing_predictor_cells(dataset);
  if (missing.empty()) {
    return {dataset.with_values(dataset.values()), trace};
  }

  const Matrix seed_completion = knn_impute(dataset, config.neighbors);
  const EdgeConstraintSet constraints =
      temporal_blacklist_from_labels(dataset.columns(), dataset.columns()[0]);

  // Working completion used to estimate the network; starts at the KNN
  // seed and is replaced wholesale by each accepted candidate.
  Matrix working = seed_completion;
  Matrix best_completion = seed_completion;
  double best_gap = kInf;
  long best_iteration = 0;
  long completed_iterations = 0;

  for (long iteration = 1; iteration <= config.iterations; ++iteration) {
    const std::vector<Cell> rehidden =
        mask_random_cells(dataset, config.mask_count, mix_seed(config.seed, 2 * iteration));

    std::vector<std::vector<Index>> hidden_by_row(static_cast<std::size_t>(dataset.n()));
    for (const Cell& cell : missing)
      hidden_by_row[static_cast<std::size_t>(cell.row)].push_back(cell.col);
    for (const Cell& cell : rehidden)
      hidden_by_row[static_cast<std::size_t>(cell.row)].push_back(cell.col);

    SearchConfig search = config.search;
    search.seed = mix_seed(config.seed, 2 * iteration + 1);
    DataTable current{dataset.columns(), working};
    const Dag structure = hill_climb(current, constraints, search).dag;
    const FittedNetwork net = fit_network(structure, current);
    const JointGaussian joint = joint_distribution(net);

    const Matrix candidate = impute_from_network(dataset, joint, hidden_by_row);
    const double gap_value = gap(dataset.values(), candidate, rehidden);
    if (!std::isfinite(gap_value))
      throw NumericError("non-finite gap at iteration " + std::to_string(iteration));

    const bool accepted = config.mode == ImputationMode::sweep || gap_value <= best_gap;
    trace.rows.push_back({iteration, gap_value, static_cast<int>(rehidden.size()), accepted});
    completed_iterations = iteration;

    if (config.mode == ImputationMode::faithful) {
      if (!accepted) break;
      best_gap = gap_value;
      best_iteration = iteration;
      working = candidate;
      best_completion = candidate;
    } else {
      working = candidate;
      if (gap_value < best_gap) {
        best_gap = gap_value;
        best_iteration = iteration;
        best_completion = candidate;
      }
    }
  }

  // The returned dataset keeps every observed cell bit-identical to the
  // input; only originally-missing cells carry imputed values.
  Matrix final_values = dataset.values();
  for (const Cell& cell : missing)
    final_values(cell.row, cell.col) = best_completion(cell.row, cell.col);

  trace.final_iteration = completed_iterations;
  trace.best_iteration = best_iteration;
  trace.best_gap = trace.rows.empty() ? 0.0 : best_gap;
  return {dataset.with_values(std::move(final_values)), trace};
}

std::string trace_to_csv(const ImputationTrace& trace) {
  std::string out = "iteration,D,accepted\n";
  for (const TraceRow& row : trace.rows) {
    out += std::to_string(row.iteration) + "," + csv::format(row.gap) + "," +
           (row.accepted ? "1" : "0") + "\n";
  }
  return out;
}

std::string trace_summary_json(const ImputationTrace& trace,
                               const ImputationConfig& config) {
  nlohmann::json doc;
  doc["mode"] = trace.mode;
  doc["iterations_run"] = trace.final_iteration;
  doc["iterations_requested"] = config.iterations;
  doc["mask_count"] = config.mask_count;
  doc["neighbors"] = config.neighbors;
  doc["seed"] = config.seed;
  doc["best_gap"] = trace.best_gap;
  doc["best_iteration"] = trace.best_iteration;
  return doc.dump(2);
}

}  // namespace rdbn
