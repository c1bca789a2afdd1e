#include "rdbn/joint_gaussian.hpp"
#include "rdbn/rng.hpp"
#include "rdbn/types.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rdbn;

namespace {

FittedNetwork four_node_network() {
  // a -> b -> d, a -> c -> d (diamond).
  Dag dag = validate_dag({"a", "b", "c", "d"},
                         {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
  FittedNetwork net;
  net.dag = dag;
  net.nodes.resize(4);
  net.nodes[0] = {.name = "a", .parents = {}, .intercept = 1.0,
                  .coefficients = Vector::Zero(0), .residual_variance = 1.5};
  net.nodes[1] = {.name = "b", .parents = {"a"}, .intercept = 0.5,
                  .coefficients = Vector::Constant(1, 0.8), .residual_variance = 0.4};
  net.nodes[2] = {.name = "c", .parents = {"a"}, .intercept = -1.0,
                  .coefficients = Vector::Constant(1, -1.1), .residual_variance = 0.6};
  Vector d_coef(2);
  d_coef << 0.9, 0.3;  // on (b, c)
  net.nodes[3] = {.name = "d", .parents = {"b", "c"}, .intercept = 2.0,
                  .coefficients = d_coef, .residual_variance = 0.2};
  return net;
}

// Test-local forward sampler, independent of the library's generator.
Matrix sample_four_node(const FittedNetwork& net, Index n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  Matrix out(n, 4);
  for (Index i = 0; i < n; ++i) {
    double a = 1.0 + std::sqrt(1.5) * unit(rng);
    double b = 0.5 + 0.8 * a + std::sqrt(0.4) * unit(rng);
    double c = -1.0 - 1.1 * a + std::sqrt(0.6) * unit(rng);
    double d = 2.0 + 0.9 * b + 0.3 * c + std::sqrt(0.2) * unit(rng);
    out.row(i) << a, b, c, d;
  }
  return out;
}

}  // namespace

TEST_CASE("single-node joint distribution") {
  Dag dag({"a"});
  FittedNetwork net;
  net.dag = dag;
  net.nodes = {{.name = "a", .parents = {}, .intercept = 3.0,
                .coefficients = Vector::Zero(0), .residual_variance = 4.0}};
  JointGaussian joint = joint_distribution(net);
  CHECK(joint.mean(0) == doctest::Approx(3.0));
  CHECK(joint.covariance(0, 0) == doctest::Approx(4.0));
}

TEST_CASE("noiseless child: covariance by linearity") {
  Dag dag = validate_dag({"x", "y"}, {{"x", "y"}});
  FittedNetwork net;
  net.dag = dag;
  net.nodes.resize(2);
  net.nodes[0] = {.name = "x", .parents = {}, .intercept = 0.0,
                  .coefficients = Vector::Zero(0), .residual_variance = 1.0};
  net.nodes[1] = {.name = "y", .parents = {"x"}, .intercept = 0.0,
                  .coefficients = Vector::Constant(1, 2.0), .residual_variance = 0.0};
  JointGaussian joint = joint_distribution(net);
  CHECK(joint.covariance(0, 1) == doctest::Approx(2.0));
  CHECK(joint.covariance(1, 1) == doctest::Approx(4.0));
  CHECK(joint.mean(1) == doctest::Approx(0.0));
}

TEST_CASE("four-node joint matches forward-sampled moments") {
  FittedNetwork net = four_node_network();
  JointGaussian joint = joint_distribution(net);

  const Index n = 1000000;
  Matrix samples = sample_four_node(net, n, 2024);
  Vector sample_mean = samples.colwise().mean().transpose();
  Matrix centered = samples.rowwise() - sample_mean.transpose();
  Matrix sample_cov = (centered.transpose() * centered) / static_cast<double>(n);

  for (Index i = 0; i < 4; ++i) {
    CHECK(std::abs(joint.mean(i) - sample_mean(i)) < 1e-2);
    for (Index j = 0; j < 4; ++j) {
      CHECK(std::abs(joint.covariance(i, j) - sample_cov(i, j)) < 2e-2);
    }
  }
}

TEST_CASE("joint covariance is symmetric positive semidefinite") {
  FittedNetwork net = four_node_network();
  JointGaussian joint = joint_distribution(net);
  Matrix diff = joint.covariance - joint.covariance.transpose();
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-9);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(joint.covariance);
  CHECK(solver.eigenvalues().minCoeff() >= -1e-9 * joint.covariance.trace());
}

TEST_CASE("predict_expectation on a fully observed parent set is the linear predictor") {
  // Two nodes, outcome regression with the study's reported coefficients.
  Dag dag = validate_dag({"X2005", "Y"}, {{"X2005", "Y"}});
  FittedNetwork net;
  net.dag = dag;
  net.nodes.resize(2);
  net.nodes[0] = {.name = "X2005", .parents = {}, .intercept = 10.0,
                  .coefficients = Vector::Zero(0), .residual_variance = 1.2};
  net.nodes[1] = {.name = "Y", .parents = {"X2005"}, .intercept = 192.574,
                  .coefficients = Vector::Constant(1, 25.139),
                  .residual_variance = 1400.0};
  double predicted = predict_expectation(net, {{"X2005", 10.0}}, "Y");
  CHECK(predicted == doctest::Approx(443.964).epsilon(1e-12));
}

TEST_CASE("predict_expectation with no evidence returns the marginal mean") {
  FittedNetwork net = four_node_network();
  JointGaussian joint = joint_distribution(net);
  double predicted = predict_expectation(net, {}, "d");
  CHECK(predicted == doctest::Approx(joint.mean(3)).epsilon(1e-12));
}

TEST_CASE("evidence on an independent variable leaves the mean unchanged") {
  Dag dag({"u", "v"});
  FittedNetwork net;
  net.dag = dag;
  net.nodes.resize(2);
  net.nodes[0] = {.name = "u", .parents = {}, .intercept = 5.0,
                  .coefficients = Vector::Zero(0), .residual_variance = 2.0};
  net.nodes[1] = {.name = "v", .parents = {}, .intercept = -3.0,
                  .coefficients = Vector::Zero(0), .residual_variance = 1.0};
  double predicted = predict_expectation(net, {{"u", 100.0}}, "v");
  CHECK(predicted == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("predict_expectation validates its arguments") {
  FittedNetwork net = four_node_network();
  CHECK_THROWS_AS(predict_expectation(net, {{"d", 1.0}}, "d"), ValidationError);
  CHECK_THROWS_AS(predict_expectation(net, {{"zz", 1.0}}, "d"), ValidationError);
  CHECK_THROWS_AS(predict_expectation(net, {}, "zz"), ValidationError);
}

TEST_CASE("singular evidence blocks fall back to the pseudo-inverse consistently") {
  // y = 2x exactly: conditioning on (x, y) jointly is rank deficient but
  // consistent evidence still has a well-defined conditional mean.
  Dag dag = validate_dag({"x", "y", "z"}, {{"x", "y"}, {"x", "z"}});
  FittedNetwork net;
  net.dag = dag;
  net.nodes.resize(3);
  net.nodes[0] = {.name = "x", .parents = {}, .intercept = 0.0,
                  .coefficients = Vector::Zero(0), .residual_variance = 1.0};
  net.nodes[1] = {.name = "y", .parents = {"x"}, .intercept = 0.0,
                  .coefficients = Vector::Constant(1, 2.0), .residual_variance = 0.0};
  net.nodes[2] = {.name = "z", .parents = {"x"}, .intercept = 0.0,
                  .coefficients = Vector::Constant(1, 1.0), .residual_variance = 0.5};
  double predicted = predict_expectation(net, {{"x", 1.0}, {"y", 2.0}}, "z");
  CHECK(predicted == doctest::Approx(1.0).epsilon(1e-9));
  // Inconsistent evidence on the degenerate pair cannot be conditioned on.
  CHECK_THROWS_AS(predict_expectation(net, {{"x", 1.0}, {"y", 5.0}}, "z"),
                  NumericError);
}
