#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace evifuse::features {

struct LarsKnot {
  double lambda = 0.0;
  // Coefficients of every input column on the standardized scale (zero for
  // inactive and excluded columns).
  Eigen::VectorXd beta;
};

struct LarsPath {
  // Column indices in the order they entered the active set (a column that
  // leaves and re-enters appears again).
  std::vector<std::size_t> entry_order;
  std::vector<std::size_t> drop_order;
  std::vector<LarsKnot> knots;
  std::vector<std::size_t> final_active;
  // Zero-variance columns that never take part.
  std::vector<std::size_t> excluded;
  Eigen::VectorXd column_mean;
  Eigen::VectorXd column_norm;

  const LarsKnot& end() const { return knots.back(); }
};

struct LarsOptions {
  // Stop once every residual correlation falls below this.
  double correlation_tolerance = 1e-10;
  // Maximum active-set size; 0 means min(n_s - 1, n_f).
  std::size_t max_active = 0;
};

// Full lasso path by least angle regression with the lasso modification
// (coefficients crossing zero leave the active set). Columns are centered and
// scaled to unit norm, y is centered; lambda is the common absolute
// correlation of the active columns with the residual, so at every knot
//   |x_j' r| <= lambda for all j, with equality (and sign(beta_j)) on the active set.
// The path runs down to lambda = 0 unless the residual correlation vanishes
// first; the active set never grows beyond max_active.
LarsPath lars_lasso_path(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const LarsOptions& options = {});

}  // namespace evifuse::features
