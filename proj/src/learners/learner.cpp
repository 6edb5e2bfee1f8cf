#include "learners/learner.hpp"

#include <cmath>
#include <numeric>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "common/util.hpp"
#include "fusion/io.hpp"

namespace evifuse::learners {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

struct Layout {
  Eigen::Index w1 = 0, b1 = 0, w2 = 0, b2 = 0;
};

Layout layout(const Shape& s) {
  Layout l;
  if (s.kind == LearnerKind::SoftmaxLinear) {
    l.b2 = s.classes * s.inputs;
  } else {
    l.b1 = s.hidden * s.inputs;
    l.w2 = l.b1 + s.hidden;
    l.b2 = l.w2 + s.classes * s.hidden;
  }
  return l;
}

void softmax_rows(Eigen::MatrixXd& logits) {
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double top = logits.row(r).maxCoeff();
    logits.row(r) = (logits.row(r).array() - top).exp().matrix();
    logits.row(r) /= logits.row(r).sum();
  }
}

}  // namespace

std::string to_string(LearnerKind kind) {
  return kind == LearnerKind::SoftmaxLinear ? "softmax_linear" : "mlp_1hidden";
}

LearnerKind learner_kind_from_string(const std::string& name) {
  if (name == "softmax_linear") return LearnerKind::SoftmaxLinear;
  if (name == "mlp_1hidden") return LearnerKind::Mlp1Hidden;
  fail(ErrorCode::InvalidArgument, "unknown learner kind '" + name + "'");
}

void LearnerConfig::validate() const {
  require(hidden_units > 0, ErrorCode::InvalidArgument, "hidden_units must be positive");
  require(learning_rate > 0.0, ErrorCode::InvalidArgument, "learning_rate must be positive");
  require(epochs >= 0, ErrorCode::InvalidArgument, "epochs must be non-negative");
  require(batch_size > 0, ErrorCode::InvalidArgument, "batch_size must be positive");
  require(l2_penalty >= 0.0, ErrorCode::InvalidArgument, "l2_penalty must be non-negative");
  require(lr_drop >= 0.0 && lr_drop < 1.0, ErrorCode::InvalidArgument, "lr_drop must be in [0,1)");
  require(lr_drop_period > 0, ErrorCode::InvalidArgument, "lr_drop_period must be positive");
}

Eigen::Index Shape::parameter_count() const {
  if (kind == LearnerKind::SoftmaxLinear) return classes * inputs + classes;
  return hidden * inputs + hidden + classes * hidden + classes;
}

Eigen::VectorXd initial_parameters(const Shape& shape, std::uint64_t seed) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(shape.parameter_count());
  if (shape.kind == LearnerKind::Mlp1Hidden) {
    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(std::max<Eigen::Index>(shape.inputs, 1)));
    for (Eigen::Index i = 0; i < shape.hidden * shape.inputs; ++i) p(i) = scale * rng.normal();
  }
  return p;
}

Eigen::MatrixXd forward(const Shape& shape, const Eigen::VectorXd& params, const Eigen::MatrixXd& features) {
  require(features.cols() == shape.inputs, ErrorCode::ShapeMismatch,
          "feature width " + std::to_string(features.cols()) + " but model expects " + std::to_string(shape.inputs));
  const auto l = layout(shape);
  Eigen::MatrixXd logits;
  if (shape.kind == LearnerKind::SoftmaxLinear) {
    const ConstMap w(params.data(), shape.classes, shape.inputs);
    logits = features * w.transpose();
  } else {
    const ConstMap w1(params.data() + l.w1, shape.hidden, shape.inputs);
    const ConstMap w2(params.data() + l.w2, shape.classes, shape.hidden);
    Eigen::MatrixXd h = features * w1.transpose();
    h.rowwise() += params.segment(l.b1, shape.hidden).transpose();
    h = h.array().tanh().matrix();
    logits = h * w2.transpose();
  }
  logits.rowwise() += params.segment(l.b2, shape.classes).transpose();
  softmax_rows(logits);
  return logits;
}

LossGradient loss_and_gradient(const Shape& shape, const Eigen::VectorXd& params, const Eigen::MatrixXd& features,
                               const infotheory::LabelVector& labels, double l2_penalty) {
  require(static_cast<std::size_t>(features.rows()) == labels.size(), ErrorCode::ShapeMismatch,
          "feature rows differ from label count");
  require(features.cols() == shape.inputs, ErrorCode::ShapeMismatch, "feature width differs from model inputs");
  const auto l = layout(shape);
  const Eigen::Index n = features.rows();
  const double inv_n = 1.0 / static_cast<double>(std::max<Eigen::Index>(n, 1));

  LossGradient out;
  out.gradient = Eigen::VectorXd::Zero(params.size());

  Eigen::MatrixXd hidden;
  Eigen::MatrixXd logits;
  if (shape.kind == LearnerKind::SoftmaxLinear) {
    const ConstMap w(params.data(), shape.classes, shape.inputs);
    logits = features * w.transpose();
  } else {
    const ConstMap w1(params.data() + l.w1, shape.hidden, shape.inputs);
    const ConstMap w2(params.data() + l.w2, shape.classes, shape.hidden);
    hidden = features * w1.transpose();
    hidden.rowwise() += params.segment(l.b1, shape.hidden).transpose();
    hidden = hidden.array().tanh().matrix();
    logits = hidden * w2.transpose();
  }
  logits.rowwise() += params.segment(l.b2, shape.classes).transpose();

  Eigen::MatrixXd delta(n, shape.classes);
  for (Eigen::Index r = 0; r < n; ++r) {
    const int y = labels[static_cast<std::size_t>(r)];
    require(y >= 0 && y < shape.classes, ErrorCode::InvalidArgument, "label outside class range");
    const double top = logits.row(r).maxCoeff();
    const Eigen::RowVectorXd e = (logits.row(r).array() - top).exp().matrix();
    const double z = e.sum();
    out.loss -= (logits(r, y) - top - std::log(z)) * inv_n;
    delta.row(r) = e / z;
    delta(r, y) -= 1.0;
  }
  delta *= inv_n;

  if (shape.kind == LearnerKind::SoftmaxLinear) {
    const ConstMap w(params.data(), shape.classes, shape.inputs);
    out.loss += 0.5 * l2_penalty * w.squaredNorm();
    MutMap gw(out.gradient.data(), shape.classes, shape.inputs);
    gw = delta.transpose() * features + l2_penalty * w;
  } else {
    const ConstMap w1(params.data() + l.w1, shape.hidden, shape.inputs);
    const ConstMap w2(params.data() + l.w2, shape.classes, shape.hidden);
    out.loss += 0.5 * l2_penalty * (w1.squaredNorm() + w2.squaredNorm());
    MutMap gw2(out.gradient.data() + l.w2, shape.classes, shape.hidden);
    gw2 = delta.transpose() * hidden + l2_penalty * w2;
    const Eigen::MatrixXd dz = ((delta * w2).array() * (1.0 - hidden.array().square())).matrix();
    MutMap gw1(out.gradient.data() + l.w1, shape.hidden, shape.inputs);
    gw1 = dz.transpose() * features + l2_penalty * w1;
    out.gradient.segment(l.b1, shape.hidden) = dz.colwise().sum().transpose();
  }
  out.gradient.segment(l.b2, shape.classes) = delta.colwise().sum().transpose();
  return out;
}

TrainedLearner train(const Eigen::MatrixXd& features, const infotheory::LabelVector& labels, int class_count,
                     const LearnerConfig& cfg) {
  cfg.validate();
  require(static_cast<std::size_t>(features.rows()) == labels.size(), ErrorCode::ShapeMismatch,
          "feature rows differ from label count");
  require(features.rows() > 0, ErrorCode::EmptyInput, "no training samples");
  require(class_count >= 1 && labels.cardinality() <= class_count, ErrorCode::InvalidArgument,
          "labels outside class range");

  TrainedLearner model;
  model.shape = {cfg.kind, features.cols(), class_count, cfg.kind == LearnerKind::Mlp1Hidden ? cfg.hidden_units : 0};
  model.seed = cfg.seed;
  model.parameters = initial_parameters(model.shape, derive_seed(cfg.seed, 1));

  Rng rng(derive_seed(cfg.seed, 2));
  const auto n = static_cast<std::size_t>(features.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  double lr = cfg.learning_rate;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (epoch > 0 && epoch % cfg.lr_drop_period == 0) lr *= 1.0 - cfg.lr_drop;
    rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
      Eigen::MatrixXd xb(static_cast<Eigen::Index>(stop - start), features.cols());
      std::vector<int> yb;
      yb.reserve(stop - start);
      for (std::size_t i = start; i < stop; ++i) {
        xb.row(static_cast<Eigen::Index>(i - start)) = features.row(static_cast<Eigen::Index>(order[i]));
        yb.push_back(labels[order[i]]);
      }
      const auto lg = loss_and_gradient(model.shape, model.parameters, xb, infotheory::LabelVector(std::move(yb)),
                                        cfg.l2_penalty);
      if (!std::isfinite(lg.loss) || !lg.gradient.allFinite())
        fail(ErrorCode::NonFiniteLoss, "loss diverged at epoch " + std::to_string(epoch) +
                                           "; lower the learning rate");
      model.parameters -= lr * lg.gradient;
    }
    const double full = loss_and_gradient(model.shape, model.parameters, features, labels, cfg.l2_penalty).loss;
    if (!std::isfinite(full))
      fail(ErrorCode::NonFiniteLoss, "loss diverged at epoch " + std::to_string(epoch) + "; lower the learning rate");
    model.training_log.push_back(full);
  }
  return model;
}

fusion::ScoreMatrix predict_scores(const TrainedLearner& model, const Eigen::MatrixXd& features,
                                   std::string classifier_id, std::vector<std::string> class_labels,
                                   std::vector<std::string> sample_ids) {
  require(static_cast<Eigen::Index>(class_labels.size()) == model.shape.classes, ErrorCode::ShapeMismatch,
          "class label count differs from model classes");
  return fusion::ScoreMatrix(std::move(classifier_id), std::move(class_labels),
                             forward(model.shape, model.parameters, features), std::move(sample_ids));
}

nlohmann::json to_json(const TrainedLearner& model) {
  nlohmann::json j;
  j["learner_kind"] = to_string(model.shape.kind);
  j["input_width"] = model.shape.inputs;
  j["class_count"] = model.shape.classes;
  j["hidden_units"] = model.shape.hidden;
  j["weights"] = std::vector<double>(model.parameters.data(), model.parameters.data() + model.parameters.size());
  j["seed"] = model.seed;
  return j;
}

TrainedLearner learner_from_json(const nlohmann::json& j) {
  try {
    TrainedLearner m;
    m.shape.kind = learner_kind_from_string(j.at("learner_kind").get<std::string>());
    m.shape.inputs = j.at("input_width").get<Eigen::Index>();
    m.shape.classes = j.at("class_count").get<Eigen::Index>();
    m.shape.hidden = m.shape.kind == LearnerKind::Mlp1Hidden ? j.at("hidden_units").get<Eigen::Index>() : 0;
    m.seed = j.at("seed").get<std::uint64_t>();
    const auto w = j.at("weights").get<std::vector<double>>();
    require(static_cast<Eigen::Index>(w.size()) == m.shape.parameter_count(), ErrorCode::ShapeMismatch,
            "weight count does not match the model shape");
    m.parameters = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("model record: ") + e.what());
  }
}

fusion::ScoreMatrix load_external_scores(const std::filesystem::path& path, const evidence::Frame& frame) {
  return fusion::parse_score_csv(read_text_file(path), path.stem().string(), frame.labels());
}

}  // namespace evifuse::learners
