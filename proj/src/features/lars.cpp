#include "features/lars.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common/error.hpp"

namespace evifuse::features {
namespace {

constexpr double kStepFloor = 1e-14;
constexpr double kDenominatorFloor = 1e-11;
// Relative residual norm below which a candidate column is considered to lie
// in the span of the active columns.
constexpr double kCollinearTolerance = 1e-8;

}  // namespace

LarsPath lars_lasso_path(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const LarsOptions& options) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  require(n >= 2, ErrorCode::TooFewSamples, "lars needs at least two samples");
  require(y.size() == n, ErrorCode::LengthMismatch, "response length differs from sample count");
  require(x.allFinite() && y.allFinite(), ErrorCode::InvalidArgument, "non-finite lars input");

  LarsPath path;
  path.column_mean = x.colwise().mean().transpose();
  Eigen::MatrixXd xs = x.rowwise() - path.column_mean.transpose();
  path.column_norm = xs.colwise().norm().transpose();
  std::vector<bool> usable(static_cast<std::size_t>(p), true);
  Eigen::Index usable_count = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double scale = std::max(1.0, x.col(j).cwiseAbs().maxCoeff());
    if (path.column_norm(j) <= 1e-12 * scale * std::sqrt(static_cast<double>(n))) {
      usable[static_cast<std::size_t>(j)] = false;
      path.excluded.push_back(static_cast<std::size_t>(j));
      xs.col(j).setZero();
    } else {
      xs.col(j) /= path.column_norm(j);
      ++usable_count;
    }
  }
  const Eigen::VectorXd yc = y.array() - y.mean();

  const auto cap = static_cast<std::size_t>(
      options.max_active > 0 ? std::min<Eigen::Index>(static_cast<Eigen::Index>(options.max_active), usable_count)
                             : std::min<Eigen::Index>(n - 1, usable_count));

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd corr = xs.transpose() * yc;
  for (Eigen::Index j = 0; j < p; ++j)
    if (!usable[static_cast<std::size_t>(j)]) corr(j) = 0.0;

  Eigen::Index first = 0;
  double lambda = corr.cwiseAbs().maxCoeff(&first);
  path.knots.push_back({lambda, beta});
  if (lambda < options.correlation_tolerance || cap == 0) return path;

  std::vector<Eigen::Index> active{first};
  std::vector<bool> in_active(static_cast<std::size_t>(p), false);
  in_active[static_cast<std::size_t>(first)] = true;
  path.entry_order.push_back(static_cast<std::size_t>(first));

  const std::size_t max_iter = 8 * static_cast<std::size_t>(std::min(n, p)) + 64;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    const auto k = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd xa(n, k);
    Eigen::VectorXd signs(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      xa.col(i) = xs.col(active[static_cast<std::size_t>(i)]);
      signs(i) = corr(active[static_cast<std::size_t>(i)]) >= 0.0 ? 1.0 : -1.0;
    }
    const Eigen::MatrixXd gram = xa.transpose() * xa;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    // Coefficient velocity per unit decrease of lambda.
    const Eigen::VectorXd dir = ldlt.solve(signs);
    const Eigen::VectorXd u = xa * dir;
    const Eigen::VectorXd a = xs.transpose() * u;

    // Next joining column.
    double gamma_add = lambda;
    Eigen::Index join = -1;
    if (active.size() < cap) {
      std::vector<bool> blocked(static_cast<std::size_t>(p), false);
      while (true) {
        gamma_add = lambda;
        join = -1;
        for (Eigen::Index j = 0; j < p; ++j) {
          const auto js = static_cast<std::size_t>(j);
          if (!usable[js] || in_active[js] || blocked[js]) continue;
          for (double t : {(1.0 - a(j)) > kDenominatorFloor ? (lambda - corr(j)) / (1.0 - a(j)) : -1.0,
                           (1.0 + a(j)) > kDenominatorFloor ? (lambda + corr(j)) / (1.0 + a(j)) : -1.0}) {
            if (t > kStepFloor && t < gamma_add) {
              gamma_add = t;
              join = j;
            }
          }
        }
        if (join < 0) break;
        const Eigen::VectorXd xj = xs.col(join);
        const Eigen::VectorXd resid = xj - xa * ldlt.solve(xa.transpose() * xj);
        if (resid.norm() > kCollinearTolerance) break;
        blocked[static_cast<std::size_t>(join)] = true;
      }
    }

    // Next active coefficient to cross zero.
    double gamma_drop = std::numeric_limits<double>::infinity();
    Eigen::Index drop_slot = -1;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double b = beta(active[static_cast<std::size_t>(i)]);
      if (dir(i) == 0.0 || b == 0.0) continue;
      const double t = -b / dir(i);
      if (t > kStepFloor && t < gamma_drop) {
        gamma_drop = t;
        drop_slot = i;
      }
    }

    const bool dropping = drop_slot >= 0 && gamma_drop < gamma_add;
    const double gamma = dropping ? gamma_drop : gamma_add;
    for (Eigen::Index i = 0; i < k; ++i) beta(active[static_cast<std::size_t>(i)]) += gamma * dir(i);
    lambda = std::max(0.0, lambda - gamma);

    if (dropping) {
      const auto gone = active[static_cast<std::size_t>(drop_slot)];
      beta(gone) = 0.0;
      in_active[static_cast<std::size_t>(gone)] = false;
      active.erase(active.begin() + drop_slot);
      path.drop_order.push_back(static_cast<std::size_t>(gone));
    } else if (join >= 0) {
      active.push_back(join);
      in_active[static_cast<std::size_t>(join)] = true;
      path.entry_order.push_back(static_cast<std::size_t>(join));
    }

    const Eigen::VectorXd resid = yc - xs * beta;
    corr = xs.transpose() * resid;
    for (Eigen::Index j = 0; j < p; ++j)
      if (!usable[static_cast<std::size_t>(j)]) corr(j) = 0.0;
    if (lambda <= options.correlation_tolerance) lambda = 0.0;
    path.knots.push_back({lambda, beta});

    if (lambda == 0.0 || corr.cwiseAbs().maxCoeff() < options.correlation_tolerance) break;
    if (active.empty()) break;
  }

  for (Eigen::Index j = 0; j < p; ++j)
    if (beta(j) != 0.0) path.final_active.push_back(static_cast<std::size_t>(j));
  return path;
}

}  // namespace evifuse::features
