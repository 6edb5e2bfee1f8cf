#include "infotheory/ranking.hpp"

#include <algorithm>
#include <limits>

#include "infotheory/information.hpp"
#include "pipeline/metrics.hpp"

namespace evifuse::infotheory {

Ranking rank_classifiers(std::span<const LabelVector> predictions, const LabelVector& y) {
  require(!predictions.empty(), ErrorCode::EmptyPool, "no classifiers to rank");
  for (const auto& p : predictions)
    require(p.size() == y.size(), ErrorCode::LengthMismatch, "prediction length differs from labels");

  const std::size_t n = predictions.size();
  std::vector<bool> taken(n, false);
  Ranking out;

  auto pick = [&](auto&& criterion) {
    std::size_t best = n;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double s = criterion(i);
      if (best == n || s > best_score + kTieTolerance) {
        best = i;
        best_score = s;
      }
    }
    taken[best] = true;
    out.order.push_back(best);
    out.scores.push_back(best_score);
  };

  pick([&](std::size_t i) { return mutual_information(predictions[i], y); });
  if (n > 1) {
    pick([&](std::size_t i) {
      double v = -std::numeric_limits<double>::infinity();
      for (auto j : out.order) v = std::max(v, conditional_mi(predictions[i], y, predictions[j]));
      return v;
    });
  }
  while (out.order.size() < n) {
    pick([&](std::size_t i) {
      double v = std::numeric_limits<double>::infinity();
      for (auto j : out.order) v = std::min(v, joint_mi(predictions[i], predictions[j], y));
      return v;
    });
  }
  return out;
}

EnsembleSelection select_ensemble(std::span<const fusion::ScoreMatrix> ranked, const LabelVector& y_val,
                                  std::span<const double> theta_grid, const fusion::FusionConfig& base,
                                  const fusion::BoeGenConfig& gen) {
  require(!ranked.empty(), ErrorCode::EmptyPool, "no ranked classifiers");
  require(!theta_grid.empty(), ErrorCode::InvalidArgument, "empty theta grid");

  EnsembleSelection out;
  out.grid.assign(ranked.size(), std::vector<double>(theta_grid.size(), 0.0));
  bool have_best = false;
  for (std::size_t size = 1; size <= ranked.size(); ++size) {
    for (std::size_t t = 0; t < theta_grid.size(); ++t) {
      auto cfg = base;
      cfg.theta = theta_grid[t];
      const auto batch = fusion::fuse_batch(ranked.first(size), cfg, gen);
      const double acc = batch.ok() ? pipeline::evaluate_accuracy(batch.fused, y_val) : 0.0;
      out.grid[size - 1][t] = acc;

      const bool better = !have_best || acc > out.accuracy ||
                          (acc == out.accuracy && size == out.size && theta_grid[t] < out.theta);
      if (better) {
        have_best = true;
        out.size = size;
        out.theta = theta_grid[t];
        out.accuracy = acc;
      }
    }
  }
  return out;
}

}  // namespace evifuse::infotheory
