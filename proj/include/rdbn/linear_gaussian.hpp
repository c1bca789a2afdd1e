#pragma once

#include "rdbn/dag.hpp"
#include "rdbn/ols.hpp"
#include "rdbn/types.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace rdbn {

/// Conditional model of one variable given its parents:
/// value = intercept + coefficients . parents + N(0, residual_variance).
/// residual_variance is the maximum-likelihood estimate (divide by n);
/// the *_se fields and unbiased_variance carry the reporting convention.
struct LinearGaussianNode {
  std::string name;
  std::vector<std::string> parents;
  double intercept = 0.0;
  Vector coefficients;
  double residual_variance = 0.0;

  double intercept_se = 0.0;
  Vector coefficient_se;
  double unbiased_variance = 0.0;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  double residual_standard_error = 0.0;
  long residual_df = 0;
  double f_statistic = 0.0;  // NaN for parentless nodes
  long f_df1 = 0;
  long f_df2 = 0;
};

struct FittedNetwork {
  Dag dag;
  std::vector<LinearGaussianNode> nodes;  // aligned with dag.nodes()
  long sample_size = 0;

  const LinearGaussianNode& node(const std::string& name) const;
  const LinearGaussianNode& node(int index) const {
    return nodes[static_cast<std::size_t>(index)];
  }
};

/// Per-node ordinary least squares on the parent sets of `dag`.
/// Requires complete data whose column set equals the dag's node set and
/// n greater than the largest parent set plus one.
FittedNetwork fit_network(const Dag& dag, const DataTable& data);

/// Sum over rows of the log of the factorized Gaussian density.
/// Throws NumericError when any residual variance is zero.
double log_likelihood(const FittedNetwork& net, const DataTable& data);

/// Gaussian BIC with ML variance estimates: maximized log-likelihood minus
/// (k/2) log n, k counting |pa(v)| + 2 parameters per node. Higher is better.
/// Decomposes exactly as the sum of the per-node local scores.
class BicScorer {
 public:
  explicit BicScorer(const DataTable& data);

  double local_score(int child, const std::vector<int>& parents) const;
  double total(const Dag& dag) const;

  Index variable_count() const { return covariance_.rows(); }
  long sample_size() const { return n_; }

 private:
  double compute(int child, const std::vector<int>& parents) const;

  Matrix covariance_;  // ML convention (divide by n)
  long n_ = 0;
  // Parent sets are encoded as bitmasks when there are at most 64
  // variables; larger problems skip the cache.
  mutable std::vector<std::unordered_map<std::uint64_t, double>> cache_;
};

double bic_score(const Dag& dag, const DataTable& data);
std::vector<double> bic_local_scores(const Dag& dag, const DataTable& data);

/// JSON rendering of a fitted network (parents, intercept, coefficients,
/// residual variance and standard errors per node).
std::string network_to_json(const FittedNetwork& net);

}  // namespace rdbn
