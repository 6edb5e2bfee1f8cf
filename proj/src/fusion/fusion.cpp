#include "fusion/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evidence/measures.hpp"

namespace evifuse::fusion {

BoeSet boes_from_scores(const Eigen::Ref<const Eigen::MatrixXd>& rows, const evidence::FramePtr& frame,
                        const BoeGenConfig& cfg) {
  const auto n_c = static_cast<Eigen::Index>(frame->size());
  require(rows.rows() >= 1, ErrorCode::TooFewBoes, "no score rows");
  require(rows.cols() == n_c, ErrorCode::LengthMismatch, "score row length differs from frame size");
  std::vector<double> w = cfg.weights.empty() ? std::vector<double>(frame->size(), 1.0) : cfg.weights;
  require(static_cast<Eigen::Index>(w.size()) == n_c, ErrorCode::LengthMismatch, "one weight per class");
  for (double v : w) require(v >= 0.0 && v <= 1.0, ErrorCode::InvalidArgument, "class weight outside [0,1]");

  std::vector<Bba> boes;
  boes.reserve(static_cast<std::size_t>(rows.rows()));
  std::vector<double> masses(frame->size());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < n_c; ++k) {
      const double y = rows(i, k);
      require(std::isfinite(y) && y >= 0.0 && y <= 1.0, ErrorCode::InvalidArgument, "score outside [0,1]");
      masses[static_cast<std::size_t>(k)] = w[static_cast<std::size_t>(k)] * y;
      total += masses[static_cast<std::size_t>(k)];
    }
    if (total > 1.0 + ScoreMatrix::kRowSumTolerance)
      fail(ErrorCode::RowSumExceedsOne, "score row " + std::to_string(i) + " sums to " + std::to_string(total));
    if (total > 1.0)
      for (auto& m : masses) m /= total;
    boes.push_back(Bba::from_singletons(frame, masses));
  }
  return BoeSet(std::move(boes));
}

std::vector<double> average_bjs(const BoeSet& boes) {
  const std::size_t n = boes.size();
  require(n >= 2, ErrorCode::TooFewBoes, "average divergence needs at least two bodies of evidence");
  std::vector<double> pair(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      pair[i * n + j] = pair[j * n + i] = evidence::bjs_divergence(boes[i], boes[j]);
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) out[i] += pair[i * n + j];
    out[i] /= static_cast<double>(n - 1);
  }
  return out;
}

SupportCredibility support_credibility(const BoeSet& boes, const FusionConfig& cfg) {
  require(cfg.epsilon > 0.0, ErrorCode::InvalidArgument, "epsilon must be positive");
  const std::size_t n = boes.size();
  SupportCredibility out;
  out.abjs = average_bjs(boes);
  out.disagreement.resize(n);
  out.sd.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.disagreement[i] = evidence::disagreement_degree(boes, i, cfg.sigma);
    out.sd[i] = 1.0 / (std::max(out.abjs[i], cfg.epsilon) * out.disagreement[i]);
  }
  const double sd_total = std::accumulate(out.sd.begin(), out.sd.end(), 0.0);
  out.sd_hat.resize(n);
  out.deng.resize(n);
  out.cd.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.sd_hat[i] = out.sd[i] / sd_total;
    out.deng[i] = evidence::deng_entropy(boes[i]);
    out.cd[i] = std::exp(out.deng[i]) * out.sd_hat[i];
  }
  const double cd_max = *std::max_element(out.cd.begin(), out.cd.end());
  out.cd_hat.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.cd_hat[i] = out.cd[i] / cd_max;
  return out;
}

ChiefSupport chief_support(const BoeSet& boes) {
  const Bba centre = evidence::mean_bba(boes.boes());
  const auto full = FocalSet::full(centre.frame_size());
  ChiefSupport out;
  double best = -1.0;
  for (const auto& fm : centre.focal()) {
    if (fm.set == full) continue;
    if (fm.mass > best) {
      best = fm.mass;
      out.chief = fm.set;
    }
  }
  if (best < 0.0) out.chief = full;

  out.sd_chief_hat.resize(boes.size());
  double top = 0.0;
  for (std::size_t i = 0; i < boes.size(); ++i) {
    out.sd_chief_hat[i] = boes[i].mass(out.chief);
    top = std::max(top, out.sd_chief_hat[i]);
  }
  if (top <= 0.0) fail(ErrorCode::DegenerateChief, "no body of evidence supports the chief focal element");
  for (auto& v : out.sd_chief_hat) v /= top;
  return out;
}

FusionTrace fuse(const BoeSet& boes, const FusionConfig& cfg) {
  require(cfg.sigma > 0.0, ErrorCode::InvalidArgument, "sigma must be positive");
  require(cfg.epsilon > 0.0, ErrorCode::InvalidArgument, "epsilon must be positive");
  const std::size_t n = boes.size();

  if (n == 1) {
    const auto chief = chief_support(boes);
    return FusionTrace{{0.0}, {0.5}, {1.0}, {evidence::deng_entropy(boes[0])}, {1.0}, chief.sd_chief_hat,
                       chief.chief, {1.0}, {1.0}, boes[0], boes[0]};
  }

  auto sc = support_credibility(boes, cfg);
  auto chief = chief_support(boes);

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = cfg.theta * sc.cd_hat[i] + (1.0 - cfg.theta) * chief.sd_chief_hat[i];
  const double w_total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(w_total > cfg.epsilon))
    fail(ErrorCode::InvalidWeights, "evidence weights sum to " + std::to_string(w_total));
  std::vector<double> w_hat(n);
  for (std::size_t i = 0; i < n; ++i) w_hat[i] = w[i] / w_total;

  Bba wae = evidence::weighted_average(boes.boes(), w_hat);
  Bba fused = wae;
  for (std::size_t i = 1; i < n; ++i) fused = evidence::combine_dempster(fused, wae);

  return FusionTrace{std::move(sc.abjs), std::move(sc.disagreement), std::move(sc.sd_hat), std::move(sc.deng),
                     std::move(sc.cd_hat), std::move(chief.sd_chief_hat), chief.chief, std::move(w),
                     std::move(w_hat), std::move(wae), std::move(fused)};
}

BatchFusion fuse_batch(std::span<const ScoreMatrix> classifiers, const FusionConfig& cfg, const BoeGenConfig& gen) {
  require(!classifiers.empty(), ErrorCode::EmptyPool, "no score matrices to fuse");
  const auto& ref = classifiers.front();
  for (const auto& c : classifiers) {
    require(c.samples() == ref.samples() && c.classes() == ref.classes(), ErrorCode::ShapeMismatch,
            "score matrix '" + c.classifier_id() + "' has a different shape");
    require(c.class_labels() == ref.class_labels(), ErrorCode::ShapeMismatch,
            "score matrix '" + c.classifier_id() + "' has a different class order");
  }
  const auto frame = evidence::make_frame(ref.class_labels());
  const Eigen::Index n_s = ref.samples();
  const Eigen::Index n_c = ref.classes();
  const auto n_clf = static_cast<Eigen::Index>(classifiers.size());

  Eigen::MatrixXd fused = Eigen::MatrixXd::Zero(n_s, n_c);
  std::vector<double> ignorance(static_cast<std::size_t>(n_s), 0.0);
  std::vector<std::optional<FusionTrace>> traces(static_cast<std::size_t>(n_s));
  std::vector<RowFailure> failures;

  Eigen::MatrixXd rows(n_clf, n_c);
  for (Eigen::Index s = 0; s < n_s; ++s) {
    for (Eigen::Index i = 0; i < n_clf; ++i) rows.row(i) = classifiers[static_cast<std::size_t>(i)].scores().row(s);
    try {
      auto trace = fuse(boes_from_scores(rows, frame, gen), cfg);
      const auto singles = trace.fused.singleton_masses();
      for (Eigen::Index k = 0; k < n_c; ++k) fused(s, k) = singles[static_cast<std::size_t>(k)];
      ignorance[static_cast<std::size_t>(s)] = trace.fused.ignorance();
      traces[static_cast<std::size_t>(s)] = std::move(trace);
    } catch (const Error& e) {
      failures.push_back({s, e.code(), e.what()});
    }
  }
  return BatchFusion{ScoreMatrix("fused", ref.class_labels(), std::move(fused), ref.sample_ids()),
                     std::move(ignorance), std::move(traces), std::move(failures)};
}

}  // namespace evifuse::fusion
