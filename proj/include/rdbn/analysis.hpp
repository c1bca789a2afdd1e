#pragma once

#include "rdbn/bootstrap.hpp"
#include "rdbn/data_pipeline.hpp"
#include "rdbn/joint_gaussian.hpp"
#include "rdbn/linear_gaussian.hpp"
#include "rdbn/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rdbn {

/// Edge into the outcome with the highest bootstrap strength; ties break
/// towards the lexicographically (chronologically) smallest parent.
/// nullopt when no edge points at the outcome.
std::optional<std::pair<std::string, double>> strongest_edge_to_outcome(
    const EdgeStrengthTable& strengths, const std::string& outcome);

/// Directed path source -> ... -> target whose intermediate node sequence
/// is lexicographically smallest; nullopt when none exists.
std::optional<std::vector<std::string>> extract_path(const Dag& dag,
                                                     const std::string& source,
                                                     const std::string& target);

/// One dependent variable of the chained-regression table.
struct RegressionColumn {
  std::string dependent;
  std::vector<std::string> regressors;
  Vector coefficients;
  Vector standard_errors;
  double intercept = 0.0;
  double intercept_se = 0.0;
  long n = 0;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  double residual_standard_error = 0.0;
  long residual_df = 0;
  double f_statistic = 0.0;
  long f_df1 = 0;
  long f_df2 = 0;
};

struct RegressionTable {
  std::vector<RegressionColumn> columns;
};

/// Per-node regression summaries along a path (the source node, having no
/// reported regression of its own, is skipped).
RegressionTable regression_table(const FittedNetwork& net,
                                 const std::vector<std::string>& path);

/// Same table for an explicit list of dependent nodes.
RegressionTable regression_table_for(const FittedNetwork& net,
                                     const std::vector<std::string>& dependents);

std::string regression_table_to_text(const RegressionTable& table);
std::string regression_table_to_csv(const RegressionTable& table);

/// Share of the observed score not explained by the fitted intercept:
/// (y - alpha) / y. Requires y > 0.
double contribution_index(double y, double alpha);

/// Observed-minus-predicted score as a fraction of observed:
/// (y - y_hat) / y. Requires y > 0.
double efficiency_index(double y, double y_hat);

struct CountryIndexRow {
  std::string country;
  double observed = 0.0;
  double predicted = 0.0;
  double contribution = 0.0;
  double efficiency = 0.0;
};

struct AnalysisReport {
  std::string subject;
  std::vector<CountryIndexRow> rows;  // in dataset country order
  double outcome_intercept = 0.0;
  std::vector<std::pair<std::string, double>> outcome_coefficients;
  bool outcome_has_parent = false;
  std::optional<std::pair<std::string, double>> strongest_edge;
  std::vector<std::string> ranked_by_contribution;  // ascending
  std::vector<std::string> ranked_by_efficiency;    // ascending
  /// Investment-to-outcome chain, when one exists in the graph.
  std::optional<std::vector<std::string>> path;
};

/// Per-country indexes with the prediction conditioned on the country's
/// full predictor row.
AnalysisReport build_report(const FittedNetwork& net, const EdgeStrengthTable& strengths,
                            const MergedDataset& data);

std::string report_to_csv(const AnalysisReport& report);
std::string report_to_json(const AnalysisReport& report);

struct CorrelationRow {
  std::string column;
  double r = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  long n = 0;
};

/// Pearson correlation of each predictor with the outcome, with Fisher-z
/// 95% confidence intervals.
std::vector<CorrelationRow> outcome_correlations(const DataTable& data,
                                                 const std::string& outcome = "Y");

std::string correlations_to_csv(const std::vector<CorrelationRow>& rows);

}  // namespace rdbn
