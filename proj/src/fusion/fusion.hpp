#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "common/error.hpp"
#include "evidence/bba.hpp"
#include "fusion/score_matrix.hpp"

namespace evifuse::fusion {

using evidence::Bba;
using evidence::BoeSet;
using evidence::FocalSet;

struct BoeGenConfig {
  // Per-class weights in [0, 1]; empty means all ones.
  std::vector<double> weights;
};

struct FusionConfig {
  double theta = 0.5;
  double sigma = 2.0;
  double epsilon = 1e-12;
};

// Every intermediate quantity of one fused sample.
struct FusionTrace {
  std::vector<double> abjs;
  std::vector<double> disagreement;
  std::vector<double> sd_hat;
  std::vector<double> deng;
  std::vector<double> cd_hat;
  std::vector<double> sd_chief_hat;
  FocalSet chief;
  std::vector<double> w;
  std::vector<double> w_hat;
  Bba wae;
  Bba fused;

  // Class index of the chief focal element, or -1 when it is not a singleton.
  int chief_index() const noexcept { return chief.is_singleton() ? static_cast<int>(chief.first()) : -1; }
};

// One BOE per row of `rows` (classifiers x classes): m(E_k) = w_k y_k and the
// remainder goes to the full frame.
BoeSet boes_from_scores(const Eigen::Ref<const Eigen::MatrixXd>& rows, const evidence::FramePtr& frame,
                        const BoeGenConfig& cfg = {});

// Mean BJS divergence of each BOE to all the others.
std::vector<double> average_bjs(const BoeSet& boes);

struct SupportCredibility {
  std::vector<double> abjs;
  std::vector<double> disagreement;
  std::vector<double> sd;
  std::vector<double> sd_hat;
  std::vector<double> deng;
  std::vector<double> cd;
  std::vector<double> cd_hat;
};

// SD_i = 1 / (max(aBJS_i, eps) * m*_i), normalized to sum one; CD =
// exp(E_d) * SD_hat, normalized to max one.
SupportCredibility support_credibility(const BoeSet& boes, const FusionConfig& cfg = {});

struct ChiefSupport {
  FocalSet chief;
  std::vector<double> sd_chief_hat;
};

// The chief focal element maximizes the mean mass over focal sets other than
// the full frame (which is chosen only if nothing else carries mass). Ties go
// to the lowest bitmask, i.e. the lowest class index for singletons.
ChiefSupport chief_support(const BoeSet& boes);

// Weighted-average evidence combined with itself N - 1 times. A single BOE
// is returned unchanged.
FusionTrace fuse(const BoeSet& boes, const FusionConfig& cfg = {});

struct RowFailure {
  Eigen::Index row = 0;
  ErrorCode code = ErrorCode::InvalidArgument;
  std::string message;
};

struct BatchFusion {
  // Singleton masses of the fused evidence; failed rows are all zero.
  ScoreMatrix fused;
  std::vector<double> ignorance;
  std::vector<std::optional<FusionTrace>> traces;
  std::vector<RowFailure> failures;

  bool ok() const noexcept { return failures.empty(); }
};

// Applies `fuse` row by row across classifiers. Per-row errors are collected.
BatchFusion fuse_batch(std::span<const ScoreMatrix> classifiers, const FusionConfig& cfg = {},
                       const BoeGenConfig& gen = {});

}  // namespace evifuse::fusion
