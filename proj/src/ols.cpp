#include "rdbn/ols.hpp"

#include <limits>

namespace rdbn {

OlsSummary summarize(const OlsFit& fit) {
  OlsSummary s;
  const Index k = fit.regressors();
  s.n = fit.n;
  s.intercept = fit.intercept;
  s.coefficients = fit.coefficients;
  s.residual_df = fit.residual_df();

  double sigma2 = fit.unbiased_variance();
  s.residual_standard_error = std::sqrt(sigma2);
  s.standard_errors = Vector::Zero(k);
  if (fit.normal_inverse.size() > 0) {
    s.intercept_se = std::sqrt(sigma2 * fit.normal_inverse(0, 0));
    for (Index j = 0; j < k; ++j) {
      s.standard_errors(j) = std::sqrt(sigma2 * fit.normal_inverse(j + 1, j + 1));
    }
  }

  s.r_squared = fit.tss > 0.0 ? 1.0 - fit.rss / fit.tss : 0.0;
  if (k > 0 && s.residual_df > 0) {
    s.adj_r_squared = 1.0 - (1.0 - s.r_squared) *
                                static_cast<double>(fit.n - 1) /
                                static_cast<double>(s.residual_df);
    s.f_df1 = k;
    s.f_df2 = s.residual_df;
    double msr = (fit.tss - fit.rss) / static_cast<double>(k);
    double mse = fit.rss / static_cast<double>(s.residual_df);
    s.f_statistic = mse > 0.0 ? msr / mse : std::numeric_limits<double>::infinity();
  } else {
    s.adj_r_squared = s.r_squared;
    s.f_statistic = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

}  // namespace rdbn
