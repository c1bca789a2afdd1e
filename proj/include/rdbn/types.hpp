#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace rdbn {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = Mat<double>;
using Vector = Vec<double>;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

/// Bad inputs: malformed files, schema violations, illegal flag values,
/// structural problems in user-supplied graphs. CLI exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical or search failures: rank-deficient designs, degenerate
/// variances, singular conditioning blocks. CLI exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A complete (no missing cells) numeric table with named columns.
struct DataTable {
  std::vector<std::string> columns;
  Matrix values;  // rows = observations, cols match `columns`

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }

  /// Index of a column label, -1 when absent.
  int column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
  }

  int require_column(const std::string& name) const {
    int idx = column_index(name);
    if (idx < 0) throw ValidationError("unknown column: " + name);
    return idx;
  }
};

}  // namespace rdbn
