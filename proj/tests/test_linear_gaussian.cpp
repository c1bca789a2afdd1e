#include "rdbn/linear_gaussian.hpp"
#include "rdbn/joint_gaussian.hpp"
#include "rdbn/rng.hpp"
#include "rdbn/types.hpp"
#include "rdbn/warnings.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace rdbn;

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;

DataTable chain_data(Index n, std::uint64_t seed) {
  // a -> b -> c with strong coefficients.
  Rng rng = make_rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  DataTable data;
  data.columns = {"a", "b", "c"};
  data.values.resize(n, 3);
  for (Index i = 0; i < n; ++i) {
    double a = unit(rng);
    double b = 0.5 + 1.2 * a + 0.3 * unit(rng);
    double c = -1.0 + 0.8 * b + 0.5 * unit(rng);
    data.values.row(i) << a, b, c;
  }
  return data;
}

DataTable noise_data(Index n, Index p, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  DataTable data;
  data.values.resize(n, p);
  for (Index j = 0; j < p; ++j) data.columns.push_back(std::string(1, char('a' + j)));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) data.values(i, j) = unit(rng);
  }
  return data;
}

// Direct per-column score computation used as the scoring oracle: OLS via
// explicit normal equations, Gaussian log-likelihood, (k/2) log n penalty.
double direct_bic(const Dag& dag, const DataTable& data) {
  const auto n = static_cast<double>(data.rows());
  double total = 0.0;
  for (int v = 0; v < dag.node_count(); ++v) {
    std::vector<int> parents = dag.parents(v);
    const auto k = static_cast<Index>(parents.size());
    Matrix design(data.rows(), k + 1);
    design.col(0).setOnes();
    for (Index j = 0; j < k; ++j)
      design.col(j + 1) = data.values.col(parents[static_cast<std::size_t>(j)]);
    Vector y = data.values.col(v);
    Vector beta = (design.transpose() * design)
                      .ldlt()
                      .solve(design.transpose() * y);
    double rss = (y - design * beta).squaredNorm();
    double sigma2 = rss / n;
    double loglik = -0.5 * n * (kLogTwoPi + std::log(sigma2) + 1.0);
    total += loglik - 0.5 * static_cast<double>(k + 2) * std::log(n);
  }
  return total;
}

}  // namespace

TEST_CASE("fit_network: parentless node gives mean and ML variance") {
  DataTable data;
  data.columns = {"a"};
  data.values.resize(3, 1);
  data.values << 1.0, 2.0, 3.0;
  Dag dag({"a"});
  FittedNetwork net = fit_network(dag, data);
  CHECK(net.node("a").intercept == doctest::Approx(2.0));
  CHECK(net.node("a").residual_variance == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("fit_network recovers exact linear data with zero variance") {
  DataTable data;
  data.columns = {"x", "y"};
  data.values.resize(6, 2);
  for (Index i = 0; i < 6; ++i) {
    data.values(i, 0) = static_cast<double>(i);
    data.values(i, 1) = 2.0 * static_cast<double>(i) + 1.0;
  }
  Dag dag = validate_dag({"x", "y"}, {{"x", "y"}});
  std::vector<std::string> warnings;
  auto previous = set_warn_handler([&warnings](const std::string& m) {
    warnings.push_back(m);
  });
  FittedNetwork net = fit_network(dag, data);
  set_warn_handler(previous);
  CHECK(net.node("y").coefficients(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(net.node("y").intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(net.node("y").residual_variance == doctest::Approx(0.0).epsilon(1e-12));
  // zero-variance fit is permitted but flagged
  CHECK(!warnings.empty());
}

TEST_CASE("fit_network rejects rank-deficient parent designs naming the node") {
  DataTable data;
  data.columns = {"a", "b", "c"};
  data.values.resize(10, 3);
  Rng rng = make_rng(5);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (Index i = 0; i < 10; ++i) {
    double a = unit(rng);
    data.values.row(i) << a, 2.0 * a, unit(rng);
  }
  Dag dag = validate_dag({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}});
  try {
    fit_network(dag, data);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("c") != std::string::npos);
  }
}

TEST_CASE("fit_network demands enough rows") {
  DataTable data;
  data.columns = {"a", "b"};
  data.values = Matrix::Zero(2, 2);
  Dag dag = validate_dag({"a", "b"}, {{"a", "b"}});
  CHECK_THROWS_AS(fit_network(dag, data), NumericError);
}

TEST_CASE("log_likelihood errors on zero residual variance") {
  DataTable data;
  data.columns = {"a"};
  data.values = Matrix::Zero(2, 1);
  Dag dag({"a"});
  FittedNetwork net = fit_network(dag, data);
  CHECK(net.node("a").residual_variance == 0.0);
  CHECK_THROWS_AS(log_likelihood(net, data), NumericError);
}

TEST_CASE("log_likelihood of independent nodes is the sum of univariate ones") {
  DataTable data = noise_data(50, 3, 99);
  Dag empty(data.columns);
  FittedNetwork net = fit_network(empty, data);
  double whole = log_likelihood(net, data);

  double parts = 0.0;
  for (Index j = 0; j < 3; ++j) {
    DataTable single;
    single.columns = {data.columns[static_cast<std::size_t>(j)]};
    single.values = data.values.col(j);
    Dag one(single.columns);
    parts += log_likelihood(fit_network(one, single), single);
  }
  CHECK(whole == doctest::Approx(parts).epsilon(1e-10));
}

TEST_CASE("log_likelihood matches the joint density evaluation") {
  DataTable data = chain_data(20, 12);
  Dag dag = validate_dag({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  FittedNetwork net = fit_network(dag, data);
  JointGaussian joint = joint_distribution(net);
  double direct = 0.0;
  for (Index i = 0; i < data.rows(); ++i) {
    direct += log_density(joint, data.values.row(i).transpose());
  }
  CHECK(log_likelihood(net, data) == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("bic_score matches the direct oracle and prefers the empty graph on noise") {
  DataTable data = noise_data(200, 3, 31);
  Dag empty(data.columns);
  Dag full = validate_dag(data.columns, {{"a", "b"}, {"a", "c"}, {"b", "c"}});

  CHECK(bic_score(empty, data) == doctest::Approx(direct_bic(empty, data)).epsilon(1e-9));
  CHECK(bic_score(full, data) == doctest::Approx(direct_bic(full, data)).epsilon(1e-9));
  CHECK(bic_score(empty, data) > bic_score(full, data));
}

TEST_CASE("adding a true strong parent raises the score") {
  DataTable data = chain_data(200, 8);
  Dag without(data.columns);
  Dag with = validate_dag(data.columns, {{"a", "b"}});
  CHECK(bic_score(with, data) > bic_score(without, data));
  CHECK(bic_score(with, data) == doctest::Approx(direct_bic(with, data)).epsilon(1e-9));
}

TEST_CASE("bic_score is invariant to edge insertion order") {
  DataTable data = chain_data(60, 21);
  Dag forward = validate_dag({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  Dag reversed_insert = validate_dag({"a", "b", "c"}, {{"b", "c"}, {"a", "b"}});
  CHECK(bic_score(forward, data) == bic_score(reversed_insert, data));
}

TEST_CASE("bic_score decomposes exactly into local scores") {
  DataTable data = chain_data(120, 44);
  Dag dag = validate_dag({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}});
  auto locals = bic_local_scores(dag, data);
  double sum = 0.0;
  for (double s : locals) sum += s;
  CHECK(bic_score(dag, data) == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("refit on self-generated data recovers coefficients within 3 SEs") {
  // a -> b with known parameters, large n.
  Dag dag = validate_dag({"a", "b"}, {{"a", "b"}});
  FittedNetwork truth;
  truth.dag = dag;
  truth.sample_size = 0;
  LinearGaussianNode a{.name = "a", .parents = {}, .intercept = 1.0,
                       .coefficients = Vector::Zero(0), .residual_variance = 2.0};
  LinearGaussianNode b{.name = "b", .parents = {"a"}, .intercept = -0.5,
                       .coefficients = Vector::Constant(1, 0.7),
                       .residual_variance = 0.25};
  truth.nodes = {a, b};

  int outside = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = make_rng(seed, 404);
    std::normal_distribution<double> unit(0.0, 1.0);
    const Index n = 100000;
    DataTable data;
    data.columns = {"a", "b"};
    data.values.resize(n, 2);
    for (Index i = 0; i < n; ++i) {
      double av = 1.0 + std::sqrt(2.0) * unit(rng);
      double bv = -0.5 + 0.7 * av + 0.5 * unit(rng);
      data.values.row(i) << av, bv;
    }
    FittedNetwork fitted = fit_network(dag, data);
    const LinearGaussianNode& node = fitted.node("b");
    total += 2;
    if (std::abs(node.coefficients(0) - 0.7) > 3.0 * node.coefficient_se(0)) ++outside;
    if (std::abs(node.intercept + 0.5) > 3.0 * node.intercept_se) ++outside;
  }
  // 3-sigma coverage is 99.73%; demand at least 99% across seeds.
  CHECK(static_cast<double>(outside) <= 0.01 * total);
}

TEST_CASE("network json export carries parameters and standard errors") {
  DataTable data = chain_data(50, 3);
  Dag dag = validate_dag({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  FittedNetwork net = fit_network(dag, data);
  std::string json = network_to_json(net);
  CHECK(json.find("\"residual_variance\"") != std::string::npos);
  CHECK(json.find("\"coefficient_se\"") != std::string::npos);
  CHECK(json.find("\"sample_size\": 50") != std::string::npos);
}
