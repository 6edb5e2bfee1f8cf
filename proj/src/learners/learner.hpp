#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "evidence/frame.hpp"
#include "fusion/score_matrix.hpp"
#include "infotheory/label_vector.hpp"

namespace evifuse::learners {

enum class LearnerKind { SoftmaxLinear, Mlp1Hidden };

std::string to_string(LearnerKind kind);
LearnerKind learner_kind_from_string(const std::string& name);

struct LearnerConfig {
  LearnerKind kind = LearnerKind::SoftmaxLinear;
  int hidden_units = 32;
  double learning_rate = 0.005;
  int epochs = 200;
  int batch_size = 128;
  double l2_penalty = 1e-4;
  std::uint64_t seed = 0;
  // The learning rate is multiplied by (1 - lr_drop) every lr_drop_period epochs.
  double lr_drop = 0.005;
  int lr_drop_period = 10;

  void validate() const;
};

struct Shape {
  LearnerKind kind = LearnerKind::SoftmaxLinear;
  Eigen::Index inputs = 0;
  Eigen::Index classes = 0;
  Eigen::Index hidden = 0;

  // softmax: W (classes x inputs, row-major), b (classes)
  // mlp:     W1 (hidden x inputs), b1 (hidden), W2 (classes x hidden), b2 (classes)
  Eigen::Index parameter_count() const;
};

struct TrainedLearner {
  Shape shape;
  Eigen::VectorXd parameters;
  std::vector<double> training_log;
  std::uint64_t seed = 0;

  Eigen::Index input_width() const noexcept { return shape.inputs; }
  Eigen::Index class_count() const noexcept { return shape.classes; }
};

// Zero weights for the output layer; the hidden layer of the MLP is drawn
// from N(0, 1/inputs) with the config seed.
Eigen::VectorXd initial_parameters(const Shape& shape, std::uint64_t seed);

// Class probabilities, one row per sample.
Eigen::MatrixXd forward(const Shape& shape, const Eigen::VectorXd& params, const Eigen::MatrixXd& features);

struct LossGradient {
  double loss = 0.0;
  Eigen::VectorXd gradient;
};

// Mean cross-entropy plus (l2 / 2) * squared norm of the weight matrices
// (biases are not penalized), with its exact gradient.
LossGradient loss_and_gradient(const Shape& shape, const Eigen::VectorXd& params, const Eigen::MatrixXd& features,
                               const infotheory::LabelVector& labels, double l2_penalty);

// Mini-batch gradient descent. Deterministic for a fixed seed.
TrainedLearner train(const Eigen::MatrixXd& features, const infotheory::LabelVector& labels, int class_count,
                     const LearnerConfig& cfg);

fusion::ScoreMatrix predict_scores(const TrainedLearner& model, const Eigen::MatrixXd& features,
                                   std::string classifier_id, std::vector<std::string> class_labels,
                                   std::vector<std::string> sample_ids = {});

nlohmann::json to_json(const TrainedLearner& model);
TrainedLearner learner_from_json(const nlohmann::json& j);

// Reads a score CSV whose class columns must match the frame.
fusion::ScoreMatrix load_external_scores(const std::filesystem::path& path, const evidence::Frame& frame);

}  // namespace evifuse::learners
