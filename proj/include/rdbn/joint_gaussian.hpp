#pragma once

#include "rdbn/linear_gaussian.hpp"
#include "rdbn/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace rdbn {

/// Closed-form joint distribution of a linear-Gaussian network.
struct JointGaussian {
  std::vector<std::string> variables;  // same order as the network's nodes
  Vector mean;
  Matrix covariance;

  int index_of(const std::string& label) const;
};

/// Mean and covariance by forward accumulation along a topological order.
JointGaussian joint_distribution(const FittedNetwork& net);

/// Log density at x (variables in JointGaussian order). Requires a
/// positive-definite covariance.
double log_density(const JointGaussian& joint, const Vector& x);

/// E[targets | observed = values]. Uses LDLT on the evidence block; a
/// singular-within-1e-10 block falls back to the pseudo-inverse with a
/// warning, and evidence inconsistent with a rank-deficient block throws.
Vector conditional_mean(const JointGaussian& joint,
                        const std::vector<int>& observed,
                        const Vector& observed_values,
                        const std::vector<int>& targets);

/// Conditional expectation of `target` given the evidence assignment.
double predict_expectation(const FittedNetwork& net,
                           const std::map<std::string, double>& evidence,
                           const std::string& target);

}  // namespace rdbn
