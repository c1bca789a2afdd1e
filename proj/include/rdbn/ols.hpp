#pragma once

#include "rdbn/types.hpp"

#include <cmath>

namespace rdbn {

/// Least-squares fit of y on [1 X]. residual sum of squares and the
/// inverse normal matrix are kept so callers can derive either variance
/// convention (ML or unbiased) and coefficient standard errors.
struct OlsFit {
  double intercept = 0.0;
  Vector coefficients;      // one per column of X
  double rss = 0.0;         // residual sum of squares
  double tss = 0.0;         // total sum of squares about the mean of y
  Index n = 0;
  Matrix normal_inverse;    // ([1 X]'[1 X])^-1, (k+1)x(k+1), intercept first
  bool rank_deficient = false;

  Index regressors() const { return coefficients.size(); }
  double ml_variance() const { return rss / static_cast<double>(n); }
  Index residual_df() const { return n - regressors() - 1; }
  double unbiased_variance() const {
    Index df = residual_df();
    return df > 0 ? rss / static_cast<double>(df) : 0.0;
  }
};

/// Derived single-equation summary in the unbiased-variance convention.
struct OlsSummary {
  double intercept = 0.0;
  double intercept_se = 0.0;
  Vector coefficients;
  Vector standard_errors;
  Index n = 0;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  double residual_standard_error = 0.0;
  Index residual_df = 0;
  double f_statistic = 0.0;  // NaN for the intercept-only model
  Index f_df1 = 0;
  Index f_df2 = 0;
};

template <typename DerivedY, typename DerivedX>
OlsFit ols_fit(const Eigen::MatrixBase<DerivedY>& y,
               const Eigen::MatrixBase<DerivedX>& x) {
  const Index n = y.rows();
  const Index k = x.cols();
  OlsFit fit;
  fit.n = n;

  Matrix design(n, k + 1);
  design.col(0).setOnes();
  if (k > 0) design.rightCols(k) = x;

  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  fit.rank_deficient = qr.rank() < k + 1;

  Vector beta = qr.solve(y.derived());
  fit.intercept = beta(0);
  fit.coefficients = beta.tail(k);

  Vector residuals = y.derived() - design * beta;
  fit.rss = residuals.squaredNorm();
  fit.tss = (y.derived().array() - y.derived().mean()).matrix().squaredNorm();
  if (!fit.rank_deficient) {
    // (X'X)^-1 = P R^-1 R^-T P' from the pivoted factorization.
    Matrix identity = Matrix::Identity(k + 1, k + 1);
    Matrix r = qr.matrixQR().topLeftCorner(k + 1, k + 1).template triangularView<Eigen::Upper>();
    Matrix rinv = r.template triangularView<Eigen::Upper>().solve(identity);
    fit.normal_inverse = qr.colsPermutation() * (rinv * rinv.transpose()) *
                         qr.colsPermutation().transpose();
  }
  return fit;
}

/// Summary statistics in the reporting (unbiased, divide by n-k-1) convention.
OlsSummary summarize(const OlsFit& fit);

}  // namespace rdbn
