#include "rdbn/ols.hpp"
#include "rdbn/rng.hpp"
#include "rdbn/types.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rdbn;

namespace {

// Textbook simple-regression oracle: closed-form slope/intercept from raw
// sums, independent of the QR path used by ols_fit.
struct SimpleOls {
  double intercept, slope, se_intercept, se_slope, r2, adj_r2, rse, f;
  long df;
};

SimpleOls simple_ols_oracle(const Vector& y, const Vector& x) {
  const long n = static_cast<long>(y.size());
  long double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (long i = 0; i < n; ++i) {
    sx += x(i);
    sy += y(i);
    sxx += static_cast<long double>(x(i)) * x(i);
    sxy += static_cast<long double>(x(i)) * y(i);
    syy += static_cast<long double>(y(i)) * y(i);
  }
  const long double mx = sx / n, my = sy / n;
  const long double sxx_c = sxx - n * mx * mx;
  const long double sxy_c = sxy - n * mx * my;
  const long double syy_c = syy - n * my * my;
  SimpleOls o;
  o.slope = static_cast<double>(sxy_c / sxx_c);
  o.intercept = static_cast<double>(my - (sxy_c / sxx_c) * mx);
  long double rss = 0;
  for (long i = 0; i < n; ++i) {
    long double r = y(i) - (o.intercept + o.slope * x(i));
    rss += r * r;
  }
  o.df = n - 2;
  long double s2 = rss / o.df;
  o.rse = static_cast<double>(std::sqrt(static_cast<double>(s2)));
  o.se_slope = static_cast<double>(std::sqrt(static_cast<double>(s2 / sxx_c)));
  o.se_intercept = static_cast<double>(
      std::sqrt(static_cast<double>(s2 * (1.0L / n + mx * mx / sxx_c))));
  o.r2 = static_cast<double>(1.0L - rss / syy_c);
  o.adj_r2 = 1.0 - (1.0 - o.r2) * (n - 1.0) / o.df;
  o.f = static_cast<double>(((syy_c - rss) / 1.0L) / s2);
  return o;
}

}  // namespace

TEST_CASE("ols matches the closed-form simple regression oracle") {
  Rng rng = make_rng(20240601);
  std::normal_distribution<double> noise(0.0, 35.0);
  std::normal_distribution<double> xdist(10.0, 1.0);
  const Index n = 57;
  Vector x(n), y(n);
  for (Index i = 0; i < n; ++i) {
    x(i) = xdist(rng);
    y(i) = 192.0 + 25.0 * x(i) + noise(rng);
  }
  OlsFit fit = ols_fit(y, x);
  OlsSummary summary = summarize(fit);
  SimpleOls oracle = simple_ols_oracle(y, x);

  CHECK(fit.intercept == doctest::Approx(oracle.intercept).epsilon(1e-9));
  CHECK(fit.coefficients(0) == doctest::Approx(oracle.slope).epsilon(1e-9));
  CHECK(summary.intercept_se == doctest::Approx(oracle.se_intercept).epsilon(1e-8));
  CHECK(summary.standard_errors(0) == doctest::Approx(oracle.se_slope).epsilon(1e-8));
  CHECK(summary.r_squared == doctest::Approx(oracle.r2).epsilon(1e-9));
  CHECK(summary.adj_r_squared == doctest::Approx(oracle.adj_r2).epsilon(1e-9));
  CHECK(summary.residual_standard_error == doctest::Approx(oracle.rse).epsilon(1e-9));
  CHECK(summary.f_statistic == doctest::Approx(oracle.f).epsilon(1e-8));
  CHECK(summary.residual_df == 55);
  CHECK(summary.f_df1 == 1);
  CHECK(summary.f_df2 == 55);
}

TEST_CASE("ols with no regressors returns mean and ML variance") {
  Vector y(3);
  y << 1.0, 2.0, 3.0;
  Matrix x(3, 0);
  OlsFit fit = ols_fit(y, x);
  CHECK(fit.intercept == doctest::Approx(2.0));
  CHECK(fit.ml_variance() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("ols on exact linear data reproduces the coefficients") {
  Vector x(5), y(5);
  x << 1, 2, 3, 4, 5;
  y = 2.0 * x + Vector::Constant(5, 1.0);
  OlsFit fit = ols_fit(y, x);
  CHECK(fit.coefficients(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.ml_variance() == doctest::Approx(0.0).epsilon(1e-12));
  OlsSummary summary = summarize(fit);
  CHECK(summary.r_squared == doctest::Approx(1.0));
  CHECK(summary.standard_errors(0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("ols flags a rank-deficient design") {
  Vector x(4);
  x << 1, 2, 3, 4;
  Matrix design(4, 2);
  design.col(0) = x;
  design.col(1) = 2.0 * x;  // collinear
  Vector y = x;
  OlsFit fit = ols_fit(y, design);
  CHECK(fit.rank_deficient);
}

TEST_CASE("residuals are orthogonal to regressors and the constant") {
  Rng rng = make_rng(77);
  std::normal_distribution<double> unit(0.0, 1.0);
  const Index n = 200;
  Matrix x(n, 3);
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < 3; ++j) x(i, j) = unit(rng);
    y(i) = 1.5 + x(i, 0) - 2.0 * x(i, 1) + 0.5 * unit(rng);
  }
  OlsFit fit = ols_fit(y, x);
  Vector fitted = Vector::Constant(n, fit.intercept);
  fitted += x * fit.coefficients;
  Vector residuals = y - fitted;
  const double tol = 1e-8 * static_cast<double>(n);
  CHECK(std::abs(residuals.sum()) < tol);
  for (Index j = 0; j < 3; ++j) {
    CHECK(std::abs(residuals.dot(x.col(j))) < tol);
  }
}
