#include "rdbn/joint_gaussian.hpp"

#include "rdbn/warnings.hpp"

#include <cmath>

namespace rdbn {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;
constexpr double kSingularTolerance = 1e-10;

}  // namespace

int JointGaussian::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i] == label) return static_cast<int>(i);
  }
  return -1;
}

JointGaussian joint_distribution(const FittedNetwork& net) {
  const int d = net.dag.node_count();
  JointGaussian joint;
  joint.variables = net.dag.nodes();
  joint.mean = Vector::Zero(d);
  joint.covariance = Matrix::Zero(d, d);

  for (int v : net.dag.topological_order()) {
    const LinearGaussianNode& model = net.node(v);
    const std::vector<int> parents = net.dag.parents(v);
    const auto k = static_cast<Index>(parents.size());

    double mu = model.intercept;
    for (Index j = 0; j < k; ++j)
      mu += model.coefficients(j) * joint.mean(parents[static_cast<std::size_t>(j)]);
    joint.mean(v) = mu;

    // Cov(v, u) = sum_p beta_p Cov(p, u) for every already-reached u;
    // Var(v) = beta' Cov_pp beta + sigma^2.
    Vector cross = Vector::Zero(d);
    for (Index j = 0; j < k; ++j)
      cross += model.coefficients(j) *
               joint.covariance.col(parents[static_cast<std::size_t>(j)]);
    joint.covariance.col(v) = cross;
    joint.covariance.row(v) = cross.transpose();
    double var = model.residual_variance;
    for (Index j = 0; j < k; ++j)
      var += model.coefficients(j) * cross(parents[static_cast<std::size_t>(j)]);
    joint.covariance(v, v) = var;
  }

  joint.covariance = ((joint.covariance + joint.covariance.transpose()) / 2.0).eval();
  return joint;
}

double log_density(const JointGaussian& joint, const Vector& x) {
  const Index d = joint.mean.size();
  Eigen::LDLT<Matrix> ldlt(joint.covariance);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any())
    throw NumericError("joint covariance is not positive definite");
  Vector diff = x - joint.mean;
  double quad = diff.dot(ldlt.solve(diff));
  double logdet = ldlt.vectorD().array().log().sum();
  return -0.5 * (static_cast<double>(d) * kLogTwoPi + logdet + quad);
}

Vector conditional_mean(const JointGaussian& joint,
                        const std::vector<int>& observed,
                        const Vector& observed_values,
                        const std::vector<int>& targets) {
  const auto no = static_cast<Index>(observed.size());
  const auto nt = static_cast<Index>(targets.size());

  Vector target_mean(nt);
  for (Index i = 0; i < nt; ++i)
    target_mean(i) = joint.mean(targets[static_cast<std::size_t>(i)]);
  if (no == 0) return target_mean;

  Matrix cov_oo(no, no);
  Matrix cov_to(nt, no);
  Vector delta(no);
  for (Index i = 0; i < no; ++i) {
    int oi = observed[static_cast<std::size_t>(i)];
    delta(i) = observed_values(i) - joint.mean(oi);
    for (Index j = 0; j < no; ++j)
      cov_oo(i, j) = joint.covariance(oi, observed[static_cast<std::size_t>(j)]);
    for (Index t = 0; t < nt; ++t)
      cov_to(t, i) = joint.covariance(targets[static_cast<std::size_t>(t)], oi);
  }

  Eigen::LDLT<Matrix> ldlt(cov_oo);
  double scale = cov_oo.diagonal().cwiseAbs().maxCoeff();
  bool well_posed = ldlt.info() == Eigen::Success &&
                    (ldlt.vectorD().array() > kSingularTolerance * std::max(scale, 1.0)).all();
  Vector weights;
  if (well_posed) {
    weights = ldlt.solve(delta);
  } else {
    warn("singular evidence covariance block; using pseudo-inverse");
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(cov_oo);
    cod.setThreshold(kSingularTolerance);
    weights = cod.solve(delta);
    double residual = (cov_oo * weights - delta).norm();
    double reference = std::max(1.0, delta.norm());
    if (residual > 1e-6 * reference)
      throw NumericError("evidence is inconsistent with a singular covariance block");
  }
  return target_mean + cov_to * weights;
}

double predict_expectation(const FittedNetwork& net,
                           const std::map<std::string, double>& evidence,
                           const std::string& target) {
  if (evidence.count(target) > 0)
    throw ValidationError("target " + target + " appears in the evidence");
  JointGaussian joint = joint_distribution(net);
  int target_idx = joint.index_of(target);
  if (target_idx < 0) throw ValidationError("unknown target: " + target);

  std::vector<int> observed;
  Vector values(static_cast<Index>(evidence.size()));
  Index i = 0;
  for (const auto& [label, value] : evidence) {
    int idx = joint.index_of(label);
    if (idx < 0) throw ValidationError("unknown evidence variable: " + label);
    observed.push_back(idx);
    values(i++) = value;
  }
  return conditional_mean(joint, observed, values, {target_idx})(0);
}

}  // namespace rdbn
