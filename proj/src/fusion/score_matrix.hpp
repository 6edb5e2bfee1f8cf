#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace evifuse::fusion {

// Per-sample class scores emitted by one classifier. Rows are samples,
// columns follow class_labels.
class ScoreMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-6;

  // Entries must lie in [0, 1]; a row summing to at most 1 + 1e-6 is
  // accepted, and one in (1, 1 + 1e-6] is rescaled to exactly 1.
  ScoreMatrix(std::string classifier_id, std::vector<std::string> class_labels, Eigen::MatrixXd scores,
              std::vector<std::string> sample_ids = {});

  const std::string& classifier_id() const noexcept { return classifier_id_; }
  const std::vector<std::string>& class_labels() const noexcept { return class_labels_; }
  const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }
  const Eigen::MatrixXd& scores() const noexcept { return scores_; }

  Eigen::Index samples() const noexcept { return scores_.rows(); }
  Eigen::Index classes() const noexcept { return scores_.cols(); }

  // Argmax per row, ties to the lowest class index.
  std::vector<int> predicted_labels() const;

 private:
  std::string classifier_id_;
  std::vector<std::string> class_labels_;
  std::vector<std::string> sample_ids_;
  Eigen::MatrixXd scores_;
};

// Index of the largest entry; first one wins on ties.
int argmax(const Eigen::Ref<const Eigen::RowVectorXd>& row);

}  // namespace evifuse::fusion
