#include "rdbn/analysis.hpp"

#include "rdbn/csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace rdbn {

namespace {

constexpr double kZ95 = 1.959963984540054;

/// Depth-first search preferring the direct edge to the target and
/// otherwise ascending child labels; the first hit is the path whose
/// intermediate sequence is lexicographically smallest.
bool dfs_path(const Dag& dag, int current, int target, std::vector<bool>& visited,
              std::vector<int>& path) {
  if (current == target) return true;
  if (dag.has_edge(current, target)) {
    path.push_back(target);
    return true;
  }
  std::vector<int> children = dag.children(current);
  std::sort(children.begin(), children.end(), [&dag](int a, int b) {
    return dag.node(a) < dag.node(b);
  });
  for (int child : children) {
    if (visited[static_cast<std::size_t>(child)]) continue;
    visited[static_cast<std::size_t>(child)] = true;
    path.push_back(child);
    if (dfs_path(dag, child, target, visited, path)) return true;
    path.pop_back();
  }
  return false;
}

std::string stat(double value, int precision = 3) {
  if (std::isnan(value)) return "";
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << value;
  return out.str();
}

}  // namespace

std::optional<std::pair<std::string, double>> strongest_edge_to_outcome(
    const EdgeStrengthTable& strengths, const std::string& outcome) {
  std::optional<std::pair<std::string, double>> best;
  for (const auto& entry : strengths.entries()) {
    if (entry.child != outcome) continue;
    if (!best || entry.strength > best->second) best = {entry.parent, entry.strength};
    // entries() is sorted by parent, so ties keep the earliest label.
  }
  return best;
}

std::optional<std::vector<std::string>> extract_path(const Dag& dag,
                                                     const std::string& source,
                                                     const std::string& target) {
  int s = dag.require_node(source);
  int t = dag.require_node(target);
  if (s == t) return std::vector<std::string>{source};

  std::vector<bool> visited(static_cast<std::size_t>(dag.node_count()), false);
  visited[static_cast<std::size_t>(s)] = true;
  std::vector<int> path{s};
  if (!dfs_path(dag, s, t, visited, path)) return std::nullopt;

  std::vector<std::string> labels;
  labels.reserve(path.size());
  for (int v : path) labels.push_back(dag.node(v));
  return labels;
}

RegressionTable regression_table(const FittedNetwork& net,
                                 const std::vector<std::string>& path) {
  std::vector<std::string> dependents(path.begin() + (path.empty() ? 0 : 1), path.end());
  return regression_table_for(net, dependents);
}

RegressionTable regression_table_for(const FittedNetwork& net,
                                     const std::vector<std::string>& dependents) {
  RegressionTable table;
  for (const std::string& dependent : dependents) {
    const LinearGaussianNode& model = net.node(dependent);
    RegressionColumn column;
    column.dependent = model.name;
    column.regressors = model.parents;
    column.coefficients = model.coefficients;
    column.standard_errors = model.coefficient_se;
    column.intercept = model.intercept;
    column.intercept_se = model.intercept_se;
    column.n = net.sample_size;
    column.r_squared = model.r_squared;
    column.adj_r_squared = model.adj_r_squared;
    column.residual_standard_error = model.residual_standard_error;
    column.residual_df = model.residual_df;
    column.f_statistic = model.f_statistic;
    column.f_df1 = model.f_df1;
    column.f_df2 = model.f_df2;
    table.columns.push_back(std::move(column));
  }
  return table;
}

std::string regression_table_to_text(const RegressionTable& table) {
  // Row labels: union of regressors in first-appearance order.
  std::vector<std::string> regressors;
  for (const auto& column : table.columns) {
    for (const auto& name : column.regressors) {
      if (std::find(regressors.begin(), regressors.end(), name) == regressors.end())
        regressors.push_back(name);
    }
  }

  const std::size_t cols = table.columns.size();
  auto cell = [&](std::size_t c, const std::string& regressor,
                  bool se_row) -> std::string {
    const auto& column = table.columns[c];
    for (std::size_t j = 0; j < column.regressors.size(); ++j) {
      if (column.regressors[j] == regressor) {
        double v = se_row ? column.standard_errors(static_cast<Index>(j))
                          : column.coefficients(static_cast<Index>(j));
        return se_row ? "(" + stat(v) + ")" : stat(v);
      }
    }
    return "";
  };

  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"Dependent:"};
  for (const auto& column : table.columns) header.push_back(column.dependent);
  grid.push_back(header);

  for (const auto& regressor : regressors) {
    std::vector<std::string> value_row{regressor}, se_row{""};
    for (std::size_t c = 0; c < cols; ++c) {
      value_row.push_back(cell(c, regressor, false));
      se_row.push_back(cell(c, regressor, true));
    }
    grid.push_back(value_row);
    grid.push_back(se_row);
  }

  std::vector<std::string> const_row{"Const."}, const_se{""};
  std::vector<std::string> obs{"Obs."}, r2{"R2"}, ar2{"Adj. R2"}, rse{"RSE (df)"},
      fstat{"F (df)"};
  for (const auto& column : table.columns) {
    const_row.push_back(stat(column.intercept));
    const_se.push_back("(" + stat(column.intercept_se) + ")");
    obs.push_back(std::to_string(column.n));
    r2.push_back(stat(column.r_squared));
    ar2.push_back(stat(column.adj_r_squared));
    rse.push_back(stat(column.residual_standard_error) + " (" +
                  std::to_string(column.residual_df) + ")");
    fstat.push_back(stat(column.f_statistic) + " (" + std::to_string(column.f_df1) +
                    "; " + std::to_string(column.f_df2) + ")");
  }
  grid.push_back(const_row);
  grid.push_back(const_se);
  grid.push_back(obs);
  grid.push_back(r2);
  grid.push_back(ar2);
  grid.push_back(rse);
  grid.push_back(fstat);

  std::vector<std::size_t> widths(cols + 1, 0);
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << std::left << std::setw(static_cast<int>(widths[c]) + 2) << row[c];
    }
    out << '\n';
  }
  return out.str();
}

std::string regression_table_to_csv(const RegressionTable& table) {
  std::string out =
      "dependent,regressor,coefficient,std_error,intercept,intercept_se,n,"
      "r_squared,adj_r_squared,rse,residual_df,f_statistic,f_df1,f_df2\n";
  for (const auto& column : table.columns) {
    for (std::size_t j = 0; j < column.regressors.size(); ++j) {
      out += column.dependent + "," + column.regressors[j] + "," +
             csv::format(column.coefficients(static_cast<Index>(j))) + "," +
             csv::format(column.standard_errors(static_cast<Index>(j))) + "," +
             csv::format(column.intercept) + "," + csv::format(column.intercept_se) +
             "," + std::to_string(column.n) + "," + csv::format(column.r_squared) +
             "," + csv::format(column.adj_r_squared) + "," +
             csv::format(column.residual_standard_error) + "," +
             std::to_string(column.residual_df) + "," +
             csv::format(column.f_statistic) + "," + std::to_string(column.f_df1) +
             "," + std::to_string(column.f_df2) + "\n";
    }
  }
  return out;
}

double contribution_index(double y, double alpha) {
  if (!(y > 0.0)) throw ValidationError("contribution index needs a positive score");
  return (y - alpha) / y;
}

double efficiency_index(double y, double y_hat) {
  if (!(y > 0.0)) throw ValidationError("efficiency index needs a positive score");
  return (y - y_hat) / y;
}

AnalysisReport build_report(const FittedNetwork& net, const EdgeStrengthTable& strengths,
                            const MergedDataset& data) {
  if (!data.complete())
    throw ValidationError("analysis requires a completed dataset");

  const std::string outcome = data.columns()[0];
  AnalysisReport report;
  report.subject = data.subject();
  report.strongest_edge = strongest_edge_to_outcome(strengths, outcome);

  const LinearGaussianNode& outcome_model = net.node(outcome);
  report.outcome_intercept = outcome_model.intercept;
  report.outcome_has_parent = !outcome_model.parents.empty();
  for (std::size_t j = 0; j < outcome_model.parents.size(); ++j) {
    report.outcome_coefficients.emplace_back(
        outcome_model.parents[j], outcome_model.coefficients(static_cast<Index>(j)));
  }

  const JointGaussian joint = joint_distribution(net);
  const int outcome_idx = joint.index_of(outcome);
  std::vector<int> observed;
  for (std::size_t c = 1; c < data.columns().size(); ++c) {
    int idx = joint.index_of(data.columns()[c]);
    if (idx < 0) throw ValidationError("network lacks column " + data.columns()[c]);
    observed.push_back(idx);
  }

  for (Index r = 0; r < data.n(); ++r) {
    Vector evidence(static_cast<Index>(observed.size()));
    for (std::size_t i = 0; i < observed.size(); ++i)
      evidence(static_cast<Index>(i)) = data.values()(r, static_cast<Index>(i + 1));
    double predicted = conditional_mean(joint, observed, evidence, {outcome_idx})(0);
    double y = data.values()(r, 0);
    report.rows.push_back({data.countries()[static_cast<std::size_t>(r)], y, predicted,
                           contribution_index(y, report.outcome_intercept),
                           efficiency_index(y, predicted)});
  }

  auto ranked = [&report](auto key) {
    std::vector<std::string> order;
    std::vector<const CountryIndexRow*> rows;
    for (const auto& row : report.rows) rows.push_back(&row);
    std::stable_sort(rows.begin(), rows.end(),
                     [&key](const CountryIndexRow* a, const CountryIndexRow* b) {
                       return key(*a) < key(*b);
                     });
    for (const auto* row : rows) order.push_back(row->country);
    return order;
  };
  report.ranked_by_contribution =
      ranked([](const CountryIndexRow& r) { return r.contribution; });
  report.ranked_by_efficiency =
      ranked([](const CountryIndexRow& r) { return r.efficiency; });
  return report;
}

std::string report_to_csv(const AnalysisReport& report) {
  std::string out = "country,Y,Y_hat,contribution,efficiency\n";
  for (const auto& row : report.rows) {
    out += row.country + "," + csv::format(row.observed) + "," +
           csv::format(row.predicted) + "," + csv::format(row.contribution) + "," +
           csv::format(row.efficiency) + "\n";
  }
  return out;
}

std::string report_to_json(const AnalysisReport& report) {
  nlohmann::json doc;
  doc["subject"] = report.subject;
  doc["outcome_intercept"] = report.outcome_intercept;
  nlohmann::json coefficients = nlohmann::json::array();
  for (const auto& [parent, value] : report.outcome_coefficients) {
    coefficients.push_back({{"parent", parent}, {"coefficient", value}});
  }
  doc["outcome_coefficients"] = coefficients;
  doc["outcome_has_parent"] = report.outcome_has_parent;
  if (report.strongest_edge) {
    doc["strongest_edge"] = {{"parent", report.strongest_edge->first},
                             {"strength", report.strongest_edge->second}};
  } else {
    doc["strongest_edge"] = nullptr;
    doc["note"] = "no outcome parent";
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"country", row.country},
                    {"Y", row.observed},
                    {"Y_hat", row.predicted},
                    {"contribution", row.contribution},
                    {"efficiency", row.efficiency}});
  }
  doc["countries"] = rows;
  doc["ranked_by_contribution"] = report.ranked_by_contribution;
  doc["ranked_by_efficiency"] = report.ranked_by_efficiency;
  if (report.path) {
    doc["path"] = *report.path;
  } else {
    doc["path"] = nullptr;
  }
  return doc.dump(2);
}

std::vector<CorrelationRow> outcome_correlations(const DataTable& data,
                                                 const std::string& outcome) {
  const int y_col = data.require_column(outcome);
  const Index n = data.rows();
  const Vector y = data.values.col(y_col);
  const double y_mean = y.mean();
  const double y_ss = (y.array() - y_mean).square().sum();

  std::vector<CorrelationRow> rows;
  for (std::size_t c = 0; c < data.columns.size(); ++c) {
    if (static_cast<int>(c) == y_col) continue;
    const Vector x = data.values.col(static_cast<Index>(c));
    const double x_mean = x.mean();
    const double x_ss = (x.array() - x_mean).square().sum();
    CorrelationRow row;
    row.column = data.columns[c];
    row.n = static_cast<long>(n);
    if (x_ss <= 0.0 || y_ss <= 0.0) {
      row.r = std::numeric_limits<double>::quiet_NaN();
      row.ci_low = row.ci_high = row.r;
    } else {
      double cov = ((x.array() - x_mean) * (y.array() - y_mean)).sum();
      row.r = cov / std::sqrt(x_ss * y_ss);
      if (n > 3) {
        double z = std::atanh(std::clamp(row.r, -0.999999999, 0.999999999));
        double half = kZ95 / std::sqrt(static_cast<double>(n - 3));
        row.ci_low = std::tanh(z - half);
        row.ci_high = std::tanh(z + half);
      } else {
        row.ci_low = -1.0;
        row.ci_high = 1.0;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::string correlations_to_csv(const std::vector<CorrelationRow>& rows) {
  std::string out = "column,r,ci_low,ci_high,n\n";
  for (const auto& row : rows) {
    out += row.column + "," + csv::format(row.r) + "," + csv::format(row.ci_low) + "," +
           csv::format(row.ci_high) + "," + std::to_string(row.n) + "\n";
  }
  return out;
}

}  // namespace rdbn
