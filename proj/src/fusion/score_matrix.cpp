#include "fusion/score_matrix.hpp"

#include <cmath>

#include "common/error.hpp"

namespace evifuse::fusion {

ScoreMatrix::ScoreMatrix(std::string classifier_id, std::vector<std::string> class_labels, Eigen::MatrixXd scores,
                         std::vector<std::string> sample_ids)
    : classifier_id_(std::move(classifier_id)),
      class_labels_(std::move(class_labels)),
      sample_ids_(std::move(sample_ids)),
      scores_(std::move(scores)) {
  require(static_cast<Eigen::Index>(class_labels_.size()) == scores_.cols(), ErrorCode::ShapeMismatch,
          "score matrix has " + std::to_string(scores_.cols()) + " columns but " +
              std::to_string(class_labels_.size()) + " class labels");
  if (sample_ids_.empty()) {
    for (Eigen::Index s = 0; s < scores_.rows(); ++s) sample_ids_.push_back(std::to_string(s));
  }
  require(static_cast<Eigen::Index>(sample_ids_.size()) == scores_.rows(), ErrorCode::ShapeMismatch,
          "sample id count differs from row count");
  for (Eigen::Index s = 0; s < scores_.rows(); ++s) {
    for (Eigen::Index k = 0; k < scores_.cols(); ++k) {
      const double v = scores_(s, k);
      require(std::isfinite(v) && v >= 0.0 && v <= 1.0, ErrorCode::InvalidArgument,
              "score outside [0,1] at row " + std::to_string(s));
    }
    const double sum = scores_.row(s).sum();
    if (sum > 1.0 + kRowSumTolerance)
      fail(ErrorCode::RowSumExceedsOne, "row " + std::to_string(s) + " sums to " + std::to_string(sum));
    if (sum > 1.0) scores_.row(s) /= sum;
  }
}

std::vector<int> ScoreMatrix::predicted_labels() const {
  std::vector<int> out(static_cast<std::size_t>(scores_.rows()));
  for (Eigen::Index s = 0; s < scores_.rows(); ++s) out[static_cast<std::size_t>(s)] = argmax(scores_.row(s));
  return out;
}

int argmax(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  int best = 0;
  for (Eigen::Index k = 1; k < row.size(); ++k)
    if (row(k) > row(best)) best = static_cast<int>(k);
  return best;
}

}  // namespace evifuse::fusion
