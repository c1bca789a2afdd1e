#include "rdbn/linear_gaussian.hpp"

#include "rdbn/warnings.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rdbn {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;  // log(2*pi)

/// Maps dag node indices to data column indices; demands equal label sets.
std::vector<int> bind_columns(const Dag& dag, const DataTable& data) {
  if (static_cast<std::size_t>(dag.node_count()) != data.columns.size())
    throw ValidationError("data columns do not match network nodes");
  std::vector<int> col(static_cast<std::size_t>(dag.node_count()));
  for (int v = 0; v < dag.node_count(); ++v) {
    col[static_cast<std::size_t>(v)] = data.require_column(dag.node(v));
  }
  return col;
}

}  // namespace

const LinearGaussianNode& FittedNetwork::node(const std::string& name) const {
  int idx = dag.index_of(name);
  if (idx < 0) throw ValidationError("unknown node: " + name);
  return nodes[static_cast<std::size_t>(idx)];
}

FittedNetwork fit_network(const Dag& dag, const DataTable& data) {
  const std::vector<int> col = bind_columns(dag, data);
  const Index n = data.rows();

  int max_parents = 0;
  for (int v = 0; v < dag.node_count(); ++v)
    max_parents = std::max(max_parents, dag.parent_count(v));
  if (n <= static_cast<Index>(max_parents) + 1)
    throw NumericError("insufficient data: need more rows than the largest parent set plus one");

  FittedNetwork net;
  net.dag = dag;
  net.sample_size = static_cast<long>(n);
  net.nodes.resize(static_cast<std::size_t>(dag.node_count()));

  for (int v = 0; v < dag.node_count(); ++v) {
    const std::vector<int> parents = dag.parents(v);
    Matrix x(n, static_cast<Index>(parents.size()));
    for (std::size_t j = 0; j < parents.size(); ++j) {
      x.col(static_cast<Index>(j)) = data.values.col(col[static_cast<std::size_t>(parents[j])]);
    }
    Vector y = data.values.col(col[static_cast<std::size_t>(v)]);

    OlsFit fit = ols_fit(y, x);
    if (fit.rank_deficient)
      throw NumericError("rank-deficient parent design for node " + dag.node(v));

    LinearGaussianNode& model = net.nodes[static_cast<std::size_t>(v)];
    model.name = dag.node(v);
    for (int p : parents) model.parents.push_back(dag.node(p));
    model.intercept = fit.intercept;
    model.coefficients = fit.coefficients;
    model.residual_variance = fit.ml_variance();
    model.unbiased_variance = fit.unbiased_variance();

    OlsSummary summary = summarize(fit);
    model.intercept_se = summary.intercept_se;
    model.coefficient_se = summary.standard_errors;
    model.r_squared = summary.r_squared;
    model.adj_r_squared = summary.adj_r_squared;
    model.residual_standard_error = summary.residual_standard_error;
    model.residual_df = static_cast<long>(summary.residual_df);
    model.f_statistic = summary.f_statistic;
    model.f_df1 = static_cast<long>(summary.f_df1);
    model.f_df2 = static_cast<long>(summary.f_df2);

    if (model.residual_variance <= 0.0)
      warn("node " + model.name + " fitted with zero residual variance");
  }
  return net;
}

double log_likelihood(const FittedNetwork& net, const DataTable& data) {
  const std::vector<int> col = bind_columns(net.dag, data);
  const Index n = data.rows();
  double total = 0.0;
  for (int v = 0; v < net.dag.node_count(); ++v) {
    const LinearGaussianNode& model = net.node(v);
    if (model.residual_variance <= 0.0)
      throw NumericError("zero residual variance at node " + model.name +
                         ": log-likelihood is unbounded");
    Vector predicted = Vector::Constant(n, model.intercept);
    for (std::size_t j = 0; j < model.parents.size(); ++j) {
      predicted += model.coefficients(static_cast<Index>(j)) *
                   data.values.col(data.require_column(model.parents[j]));
    }
    double rss = (data.values.col(col[static_cast<std::size_t>(v)]) - predicted).squaredNorm();
    total += -0.5 * static_cast<double>(n) *
                 (kLogTwoPi + std::log(model.residual_variance)) -
             rss / (2.0 * model.residual_variance);
  }
  return total;
}

BicScorer::BicScorer(const DataTable& data) : n_(static_cast<long>(data.rows())) {
  const Index p = data.cols();
  Vector mean = data.values.colwise().mean().transpose();
  Matrix centered = data.values.rowwise() - mean.transpose();
  covariance_ = (centered.transpose() * centered) / static_cast<double>(n_);
  if (p <= 64) cache_.resize(static_cast<std::size_t>(p));
}

double BicScorer::compute(int child, const std::vector<int>& parents) const {
  const auto k = static_cast<Index>(parents.size());
  double sigma2;
  if (k == 0) {
    sigma2 = covariance_(child, child);
  } else {
    Matrix cov_pp(k, k);
    Vector cov_pc(k);
    for (Index i = 0; i < k; ++i) {
      cov_pc(i) = covariance_(parents[static_cast<std::size_t>(i)], child);
      for (Index j = 0; j < k; ++j) {
        cov_pp(i, j) = covariance_(parents[static_cast<std::size_t>(i)],
                                   parents[static_cast<std::size_t>(j)]);
      }
    }
    Vector beta = cov_pp.ldlt().solve(cov_pc);
    sigma2 = covariance_(child, child) - cov_pc.dot(beta);
  }
  double n = static_cast<double>(n_);
  if (!(sigma2 > 0.0)) return std::numeric_limits<double>::infinity();
  double loglik = -0.5 * n * (kLogTwoPi + std::log(sigma2) + 1.0);
  double penalty = 0.5 * static_cast<double>(k + 2) * std::log(n);
  return loglik - penalty;
}

double BicScorer::local_score(int child, const std::vector<int>& parents) const {
  if (cache_.empty()) return compute(child, parents);
  std::uint64_t mask = 0;
  for (int p : parents) mask |= std::uint64_t{1} << p;
  auto& bucket = cache_[static_cast<std::size_t>(child)];
  auto it = bucket.find(mask);
  if (it != bucket.end()) return it->second;
  double score = compute(child, parents);
  bucket.emplace(mask, score);
  return score;
}

double BicScorer::total(const Dag& dag) const {
  double sum = 0.0;
  for (int v = 0; v < dag.node_count(); ++v) sum += local_score(v, dag.parents(v));
  return sum;
}

double bic_score(const Dag& dag, const DataTable& data) {
  const std::vector<int> col = bind_columns(dag, data);
  // Reorder columns so scorer indices coincide with node indices.
  DataTable aligned;
  aligned.columns = dag.nodes();
  aligned.values.resize(data.rows(), data.cols());
  for (int v = 0; v < dag.node_count(); ++v)
    aligned.values.col(v) = data.values.col(col[static_cast<std::size_t>(v)]);
  BicScorer scorer(aligned);
  return scorer.total(dag);
}

std::vector<double> bic_local_scores(const Dag& dag, const DataTable& data) {
  const std::vector<int> col = bind_columns(dag, data);
  DataTable aligned;
  aligned.columns = dag.nodes();
  aligned.values.resize(data.rows(), data.cols());
  for (int v = 0; v < dag.node_count(); ++v)
    aligned.values.col(v) = data.values.col(col[static_cast<std::size_t>(v)]);
  BicScorer scorer(aligned);
  std::vector<double> scores(static_cast<std::size_t>(dag.node_count()));
  for (int v = 0; v < dag.node_count(); ++v)
    scores[static_cast<std::size_t>(v)] = scorer.local_score(v, dag.parents(v));
  return scores;
}

std::string network_to_json(const FittedNetwork& net) {
  nlohmann::json doc;
  doc["sample_size"] = net.sample_size;
  nlohmann::json nodes = nlohmann::json::object();
  for (const LinearGaussianNode& model : net.nodes) {
    nlohmann::json entry;
    entry["parents"] = model.parents;
    entry["intercept"] = model.intercept;
    entry["intercept_se"] = model.intercept_se;
    std::vector<double> coef(model.coefficients.begin(), model.coefficients.end());
    std::vector<double> se(model.coefficient_se.begin(), model.coefficient_se.end());
    entry["coefficients"] = coef;
    entry["coefficient_se"] = se;
    entry["residual_variance"] = model.residual_variance;
    entry["unbiased_variance"] = model.unbiased_variance;
    nodes[model.name] = entry;
  }
  doc["nodes"] = nodes;
  return doc.dump(2);
}

}  // namespace rdbn
