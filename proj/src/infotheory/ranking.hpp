#pragma once

#include <span>
#include <vector>

#include "fusion/fusion.hpp"
#include "infotheory/label_vector.hpp"

namespace evifuse::infotheory {

// Scores closer than this are treated as tied and resolved by lower index.
inline constexpr double kTieTolerance = 1e-12;

struct Ranking {
  std::vector<std::size_t> order;
  // Selection criterion value of each pick, in pick order.
  std::vector<double> scores;
};

// Greedy information-theoretic ordering of classifiers by their predicted
// labels:
//   1st: max I(pred_i; y)
//   2nd: max over i of (max over ranked j of I(pred_i; y | pred_j))
//   rest: max over i of (min over ranked j of JMI(pred_i, pred_j; y))
Ranking rank_classifiers(std::span<const LabelVector> predictions, const LabelVector& y);

struct EnsembleSelection {
  std::size_t size = 0;
  double theta = 0.0;
  double accuracy = 0.0;
  // accuracy[size - 1][theta index] over the grid as given.
  std::vector<std::vector<double>> grid;
};

// Fused validation accuracy of every (prefix size, theta) cell. Cells in which
// any sample fails to fuse score 0. The best cell wins; ties go to the smaller
// size, then the smaller theta.
EnsembleSelection select_ensemble(std::span<const fusion::ScoreMatrix> ranked, const LabelVector& y_val,
                                  std::span<const double> theta_grid, const fusion::FusionConfig& base = {},
                                  const fusion::BoeGenConfig& gen = {});

struct RankingResult {
  std::vector<std::size_t> order;
  std::vector<double> scores;
  std::size_t selected_size = 0;
  double selected_theta = 0.0;
  double validation_accuracy = 0.0;
};

}  // namespace evifuse::infotheory
