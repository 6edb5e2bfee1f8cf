// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is non-zero when any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "evidence/measures.hpp"
#include "features/lars.hpp"
#include "fusion/fusion.hpp"
#include "helpers.hpp"
#include "info_oracle.hpp"
#include "infotheory/information.hpp"
#include "infotheory/ranking.hpp"
#include "lasso_oracle.hpp"
#include "learners/learner.hpp"
#include "misc_oracles.hpp"
#include "pipeline/experiment.hpp"
#include "pipeline/sampling.hpp"
#include "pipeline/synth.hpp"

namespace fs = std::filesystem;
using namespace evifuse;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

std::string fmt(const std::vector<double>& v, int digits = 4) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i], digits);
  return s + "]";
}

bool within(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i)
    if (!(std::abs(got[i] - want[i]) <= tol)) return false;
  return true;
}

evidence::BoeSet example_boes() {
  Eigen::MatrixXd r(4, 3);
  r << 0.5, 0.1, 0.4, 0.3, 0.3, 0.4, 0.5, 0.0, 0.5, 0.4, 0.2, 0.4;
  return fusion::boes_from_scores(r, evidence::make_indexed_frame(3));
}

// ---------------------------------------------------------------- 1
void four_source_tight(Outcome& o) {
  const auto boes = example_boes();
  const auto abjs = fusion::average_bjs(boes);
  std::vector<double> sw, deng;
  for (std::size_t q = 0; q < 4; ++q) {
    sw.push_back(evidence::evidence_spread(boes, q).sw_without);
    deng.push_back(evidence::deng_entropy(boes[q]));
  }
  const std::vector<double> pairs{evidence::bjs_divergence(boes[0], boes[1]), evidence::bjs_divergence(boes[0], boes[2]),
                                  evidence::bjs_divergence(boes[0], boes[3])};
  o.expect(within(abjs, {0.042, 0.080, 0.111, 0.046}, 1e-3), "aBJS " + fmt(abjs));
  o.expect(within(sw, {0.141, 0.099, 0.094, 0.154}, 1e-3), "SW~i " + fmt(sw));
  o.expect(within(deng, {0.410, 0.473, 0.301, 0.458}, 1e-3), "Ed " + fmt(deng));
  o.expect(within(pairs, {0.056, 0.054, 0.0163}, 1e-3), "pair BJS " + fmt(pairs));
  o.detail << "aBJS " << fmt(abjs, 3) << ", SW~i " << fmt(sw, 3) << ", Ed " << fmt(deng, 3) << ", BJS "
           << fmt(pairs, 4);
}

// ---------------------------------------------------------------- 2
void four_source_relaxed(Outcome& o) {
  // The printed intermediate values follow sigma = 0.5; the default is 2.
  const auto t = fusion::fuse(example_boes(), {0.5, 0.5});
  const auto wae = t.wae.singleton_masses(), fused = t.fused.singleton_masses();
  const auto arg = std::max_element(fused.begin(), fused.end()) - fused.begin();
  o.expect(within(t.disagreement, {0.496, 0.522, 0.525, 0.487}, 1e-3), "m* " + fmt(t.disagreement));
  o.expect(within(t.sd_hat, {0.358, 0.178, 0.128, 0.336}, 0.02), "SD^ " + fmt(t.sd_hat));
  o.expect(within(t.cd_hat, {1.00, 0.53, 0.32, 0.99}, 0.02), "CD^ " + fmt(t.cd_hat));
  o.expect(within(t.sd_chief_hat, {1.00, 0.60, 1.00, 0.80}, 1e-6), "chief support " + fmt(t.sd_chief_hat));
  o.expect(within(t.w_hat, {0.32, 0.18, 0.21, 0.29}, 0.02), "W^ " + fmt(t.w_hat));
  o.expect(within(wae, {0.44, 0.14, 0.42}, 0.02), "WAE " + fmt(wae));
  o.expect(arg == 0, "fused argmax " + std::to_string(arg));

  const auto d = fusion::fuse(example_boes(), {0.5});
  const auto d_wae = d.wae.singleton_masses(), d_fused = d.fused.singleton_masses();
  o.expect(within(d.sd_hat, {0.358, 0.178, 0.128, 0.336}, 0.02), "default SD^ " + fmt(d.sd_hat));
  o.expect(within(d.w_hat, {0.32, 0.18, 0.21, 0.29}, 0.02), "default W^ " + fmt(d.w_hat));
  o.expect(within(d_wae, {0.44, 0.14, 0.42}, 0.02), "default WAE " + fmt(d_wae));
  o.expect(std::max_element(d_fused.begin(), d_fused.end()) == d_fused.begin(), "default fused argmax");
  o.detail << "sigma 0.5: m* " << fmt(t.disagreement, 3) << ", SD^ " << fmt(t.sd_hat, 3) << ", CD^ "
           << fmt(t.cd_hat, 2) << ", W^ " << fmt(t.w_hat, 3) << ", WAE " << fmt(wae, 3) << ", fused "
           << fmt(fused, 3) << "; sigma 2: SD^ " << fmt(d.sd_hat, 3) << ", CD^ " << fmt(d.cd_hat, 3) << ", W^ "
           << fmt(d.w_hat, 3);
}

// ---------------------------------------------------------------- 3
void dempster_oracle(Outcome& o) {
  std::mt19937_64 rng(2024);
  double worst = 0, worst_comm = 0, worst_assoc = 0;
  int combined = 0, conflicts = 0, composite = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto f = evidence::make_indexed_frame(1 + static_cast<std::size_t>(trial % 3));
    auto a = testing::random_bba(rng, f), b = testing::random_bba(rng, f), c = testing::random_bba(rng, f);
    for (const auto& fm : a.focal()) composite += fm.set.cardinality() > 1;
    const auto ma = testing::to_mass(a), mb = testing::to_mass(b);
    const double k = oracle::conflict(ma, mb);
    worst = std::max(worst, std::abs(evidence::conflict_k(a, b) - k));
    if (k >= 1 - 1e-9) {
      ++conflicts;
      continue;
    }
    const auto expected = oracle::combine(ma, mb);
    const auto got = evidence::combine_dempster(a, b);
    for (const auto& [bits, m] : expected) worst = std::max(worst, std::abs(got.mass(evidence::FocalSet(bits)) - m));
    for (const auto& fm : got.focal()) worst = std::max(worst, std::abs(fm.mass - oracle::get(expected, fm.set.bits())));
    ++combined;

    const auto ba = evidence::combine_dempster(b, a);
    for (const auto& s : evidence::focal_union(got, ba))
      worst_comm = std::max(worst_comm, std::abs(got.mass(s) - ba.mass(s)));
    try {
      const auto left = evidence::combine_dempster(got, c);
      const auto right = evidence::combine_dempster(a, evidence::combine_dempster(b, c));
      for (const auto& s : evidence::focal_union(left, right))
        worst_assoc = std::max(worst_assoc, std::abs(left.mass(s) - right.mass(s)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TotalConflict) throw;
    }
  }
  o.expect(worst <= 1e-9, "oracle deviation " + std::to_string(worst));
  o.expect(worst_comm <= 1e-9, "commutativity deviation " + std::to_string(worst_comm));
  o.expect(worst_assoc <= 1e-9, "associativity deviation " + std::to_string(worst_assoc));
  o.expect(composite > 0, "no composite focal sets drawn");
  o.detail << combined << " combined pairs (" << conflicts << " total conflicts), max |diff| oracle " << worst
           << ", commutativity " << worst_comm << ", associativity " << worst_assoc;
}

// ---------------------------------------------------------------- 4
Eigen::MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> n(0, 1);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

void lars_oracle(Outcome& o) {
  std::mt19937_64 rng(99);
  double worst_cd = 0, worst_soft = 0;
  std::size_t max_active = 0;
  int knots_checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd x = gaussian(rng, 10, 20);
    const Eigen::VectorXd y = gaussian(rng, 10, 1);
    const auto path = features::lars_lasso_path(x, y);
    const auto s = oracle::standardize(x, y);
    for (const auto& k : path.knots)
      max_active = std::max(max_active, static_cast<std::size_t>((k.beta.array() != 0.0).count()));
    const std::size_t m = path.knots.size();
    if (m < 5) {
      o.expect(false, "path too short");
      continue;
    }
    for (std::size_t i : {m / 4, m / 2, 3 * m / 4}) {
      const auto& k = path.knots[i];
      const Eigen::VectorXd cd = oracle::lasso_cd(s.x, s.y, k.lambda);
      worst_cd = std::max(worst_cd, (cd - k.beta).cwiseAbs().maxCoeff());
      ++knots_checked;
    }
  }
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 12, p = 2 + trial % 6;
    Eigen::MatrixXd g = gaussian(rng, n, p);
    g.rowwise() -= g.colwise().mean();
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() * Eigen::MatrixXd::Identity(n, p);
    const Eigen::VectorXd y = gaussian(rng, n, 1);
    const Eigen::VectorXd ols = q.transpose() * (y.array() - y.mean()).matrix();
    for (const auto& k : features::lars_lasso_path(q, y).knots)
      for (Eigen::Index j = 0; j < p; ++j)
        worst_soft = std::max(worst_soft, std::abs(k.beta(j) - oracle::soft_threshold(ols(j), k.lambda)));
  }
  o.expect(worst_cd <= 1e-6, "coordinate descent deviation " + std::to_string(worst_cd));
  o.expect(worst_soft <= 1e-9, "soft-threshold deviation " + std::to_string(worst_soft));
  o.expect(max_active <= 9, "active set reached " + std::to_string(max_active));
  o.detail << knots_checked << " interior knots, max |diff| vs coordinate descent " << worst_cd
           << ", vs soft threshold " << worst_soft << ", largest active set " << max_active << " (bound 9)";
}

// ---------------------------------------------------------------- 5
std::vector<int> random_labels(std::mt19937_64& rng, std::size_t n, int k) {
  std::uniform_int_distribution<int> d(0, k - 1);
  std::vector<int> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

void information_identities(Outcome& o) {
  std::mt19937_64 rng(5);
  double worst_sym = 0, worst_chain = 0, most_negative = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 2 + trial % 4;
    const auto xv = random_labels(rng, 10 + static_cast<std::size_t>(trial % 50), k);
    const auto yv = random_labels(rng, xv.size(), k), wv = random_labels(rng, xv.size(), k);
    const infotheory::LabelVector x(xv), y(yv), w(wv);
    worst_sym = std::max(worst_sym, std::abs(infotheory::mutual_information(x, y) - infotheory::mutual_information(y, x)));
    worst_chain = std::max(worst_chain, std::abs(infotheory::joint_mi(x, w, y) - oracle::mi(oracle::pair(xv, wv), yv)));
    for (double v : {infotheory::mutual_information(x, y), infotheory::conditional_mi(x, y, w),
                     infotheory::joint_mi(x, w, y), infotheory::entropy(x)})
      most_negative = std::min(most_negative, v);
  }
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + trial % 3;
    const auto y = random_labels(rng, 30, k);
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> d(0, k - 1);
    std::vector<std::vector<int>> p;
    std::vector<infotheory::LabelVector> preds;
    for (int c = 0; c < 5; ++c) {
      auto v = y;
      for (auto& e : v)
        if (u(rng) > 0.35 + 0.1 * c) e = d(rng);
      p.push_back(v);
      preds.emplace_back(v);
    }
    if (infotheory::rank_classifiers(preds, infotheory::LabelVector(y)).order != oracle::rank(p, y)) ++mismatches;
  }
  o.expect(worst_sym <= 1e-12, "symmetry deviation " + std::to_string(worst_sym));
  o.expect(worst_chain <= 1e-12, "chain rule deviation " + std::to_string(worst_chain));
  o.expect(most_negative >= -1e-12, "negative measure " + std::to_string(most_negative));
  o.expect(mismatches == 0, std::to_string(mismatches) + " ranking mismatches");
  o.detail << "500 triples: max symmetry gap " << worst_sym << ", chain rule gap " << worst_chain << ", min value "
           << most_negative << "; 100 pools: " << mismatches << " ranking mismatches";
}

// ---------------------------------------------------------------- 6
void gradient_check(Outcome& o) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> cls(0, 2);
  double worst = 0;
  for (int trial = 0; trial < 25; ++trial)
    for (auto kind : {learners::LearnerKind::SoftmaxLinear, learners::LearnerKind::Mlp1Hidden}) {
      const learners::Shape s{kind, 3, 3, kind == learners::LearnerKind::Mlp1Hidden ? 4 : 0};
      const Eigen::VectorXd p = 0.5 * gaussian(rng, s.parameter_count(), 1);
      const Eigen::MatrixXd x = gaussian(rng, 5, 3);
      std::vector<int> yv(5);
      for (auto& v : yv) v = cls(rng);
      const infotheory::LabelVector y(yv);
      const auto g = learners::loss_and_gradient(s, p, x, y, 1e-3).gradient;
      const double h = 1e-5;
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        Eigen::VectorXd a = p, b = p;
        a(i) += h;
        b(i) -= h;
        const double fd =
            (learners::loss_and_gradient(s, a, x, y, 1e-3).loss - learners::loss_and_gradient(s, b, x, y, 1e-3).loss) /
            (2 * h);
        worst = std::max(worst, std::abs(fd - g(i)) / std::max({std::abs(fd), std::abs(g(i)), 1e-6}));
      }
    }
  o.expect(worst <= 1e-5, "relative error " + std::to_string(worst));
  o.detail << "50 instances over both learner kinds, max relative error " << worst;
}

// ---------------------------------------------------------------- 7
void ensemble_beats_best(Outcome& o) {
  const auto ds = pipeline::synthesize_frf_dataset(60, 30, 1024, 0);
  pipeline::ExperimentConfig cfg;
  cfg.repetitions = 20;
  const auto report = pipeline::run_experiment(ds, cfg, 0);
  o.expect(report.completed == 20, std::to_string(report.completed) + "/20 repetitions completed");
  if (report.completed == 0) return;
  const auto best = report.best_learner();
  const double best_mean = report.per_learner[best].summary().mean;
  const double fused_mean = report.fused.summary().mean;
  o.expect(fused_mean >= best_mean, "fused mean below the best learner");

  int grid_mismatches = 0;
  for (int r = 0; r < cfg.repetitions; ++r) {
    const auto out = pipeline::run_repetition(ds, cfg, pipeline::repetition_seed(cfg.seed, r));
    std::vector<std::vector<std::vector<double>>> rows;
    for (const auto& m : out.ranked_scores) {
      rows.emplace_back();
      for (Eigen::Index s = 0; s < m.samples(); ++s) {
        const Eigen::RowVectorXd row = m.scores().row(s);
        rows.back().emplace_back(row.data(), row.data() + row.size());
      }
    }
    const std::vector<int> y(out.validation_labels.values().begin(), out.validation_labels.values().end());
    const auto g = oracle::exhaustive_grid(rows, y, cfg.theta_grid);
    const bool same = g.size == out.ranking.selected_size && g.theta == out.ranking.selected_theta &&
                      std::abs(g.accuracy - out.ranking.validation_accuracy) <= 1e-12;
    const auto idx = std::find(report.fused.repetitions.begin(), report.fused.repetitions.end(), r);
    const bool consistent = idx != report.fused.repetitions.end() &&
                            report.fused.values[static_cast<std::size_t>(idx - report.fused.repetitions.begin())] ==
                                out.ranking.validation_accuracy;
    if (!same || !consistent) ++grid_mismatches;
  }
  o.expect(grid_mismatches == 0, std::to_string(grid_mismatches) + " repetitions disagree with exhaustive search");
  o.detail << "fused mean " << fmt(fused_mean) << " vs best learner " << report.learners[best] << " "
           << fmt(best_mean) << "; selection matched exhaustive search on " << (cfg.repetitions - grid_mismatches)
           << "/" << cfg.repetitions << " repetitions";
}

// ---------------------------------------------------------------- 8
void noise_trend(Outcome& o) {
  const auto ds = pipeline::synthesize_frf_dataset(60, 30, 1024, 0);
  pipeline::ExperimentConfig cfg;
  cfg.repetitions = 20;
  cfg.noise_sweep = true;
  cfg.nsr_levels = {0, 20, 160};
  const auto report = pipeline::run_experiment(ds, cfg, 0);
  if (report.noise_sweep.size() != 3) {
    o.expect(false, "missing noise levels");
    return;
  }
  std::vector<double> means;
  bool exact = true;
  for (const auto& level : report.noise_sweep) {
    o.expect(level.fused.values.size() == 20, "incomplete level " + fmt(level.nsr_percent, 0));
    means.push_back(level.fused.summary().mean);
    const double expected = level.nsr_percent == 0 ? INFINITY : -20.0 * std::log10(level.nsr_percent / 100.0);
    exact = exact && level.snr_db == expected;
  }
  o.expect(means[2] < means[0], "no drop at 160%");
  o.expect(means[0] - means[1] < means[0] - means[2], "20% drop not smaller than 160% drop");
  o.expect(exact, "recorded SNR differs from -20 log10(NSR)");
  o.detail << "fused mean at NSR 0/20/160%: " << fmt(means) << "; SNR dB " << report.noise_sweep[1].snr_db << ", "
           << report.noise_sweep[2].snr_db;
}

// ---------------------------------------------------------------- 9
void bandwidth_property(Outcome& o) {
  pipeline::SynthConfig sc;
  sc.seed = 0;
  const double width = (sc.f_max_hz - sc.f_min_hz) / 16.0;
  const std::size_t signature = 6;
  sc.defect_band_lo_hz = sc.f_min_hz + width * signature + 0.15 * width;
  sc.defect_band_hi_hz = sc.f_min_hz + width * (signature + 1) - 0.15 * width;
  const auto ds = pipeline::synthesize(sc).dataset;

  pipeline::ExperimentConfig cfg;
  cfg.repetitions = 10;
  cfg.bandwidth_sweep = true;
  cfg.bandwidth_sections = {16};
  const auto report = pipeline::run_experiment(ds, cfg, 0);
  if (report.bandwidth_sweep.size() != 1 || report.bandwidth_sweep[0].bands.size() != 16 || report.completed == 0) {
    o.expect(false, "band sweep incomplete");
    return;
  }
  const auto& bands = report.bandwidth_sweep[0].bands;
  std::vector<double> means;
  for (const auto& b : bands) means.push_back(b.fused.summary().mean);
  const auto best = static_cast<std::size_t>(std::max_element(means.begin(), means.end()) - means.begin());
  const double full = report.fused.summary().mean;
  // The section holding the signature band on the actual frequency axis.
  std::size_t holder = 0;
  for (const auto& b : bands)
    if (ds.frequencies[b.begin] <= *sc.defect_band_lo_hz) holder = b.index;
  o.expect(best == holder, "best section " + std::to_string(best) + ", signature in " + std::to_string(holder));
  o.expect(std::abs(means[best] - full) <= 0.02, "best section " + fmt(means[best]) + " vs full " + fmt(full));
  o.detail << "best section " << best << " (signature " << holder << ", starts " << fmt(bands[best].start_hz, 0)
           << " Hz) fused mean " << fmt(means[best]) << " vs full band " << fmt(full) << "; runner-up "
           << fmt([&] {
                auto m = means;
                std::sort(m.rbegin(), m.rend());
                return m[1];
              }());
}

// ---------------------------------------------------------------- 10
int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(Outcome& o, const std::string& cli) {
  if (cli.empty()) {
    o.expect(false, "no --cli path given");
    return;
  }
  const auto dir = fs::temp_directory_path() / "evifuse_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string data = (dir / "d.csv").string();
  o.expect(shell(cli + " synth --healthy 30 --defected 16 --nf 256 --seed 3 -o " + data + " > /dev/null") == 0,
           "synth failed");
  const std::string common = cli + " run -i " + data + " --seed 17 --repetitions 6 --nsr 50 --bands 4";
  o.expect(shell(common + " -j 1 -o " + (dir / "a").string() + " > /dev/null") == 0, "run a failed");
  o.expect(shell(common + " -j 1 -o " + (dir / "b").string() + " > /dev/null") == 0, "run b failed");
  o.expect(shell(common + " -j 4 -o " + (dir / "c").string() + " > /dev/null") == 0, "run c failed");
  const auto a = slurp(dir / "a/metrics.json");
  o.expect(!a.empty(), "empty report");
  o.expect(a == slurp(dir / "b/metrics.json"), "two serial runs differ");
  o.expect(a == slurp(dir / "c/metrics.json"), "--jobs 1 and --jobs 4 differ");
  o.detail << "metrics.json " << a.size() << " bytes, identical across two serial runs and --jobs 4";
  fs::remove_all(dir);
}

struct Criterion {
  int number;
  std::string name;
  double limit_seconds;  // 0: no limit stated
  std::function<void(Outcome&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) cli = argv[++i];
    else only.push_back(std::atoi(argv[i]));
  }

  const std::vector<Criterion> criteria{
      {1, "four-source example, tight values", 1, four_source_tight},
      {2, "four-source example, relaxed values", 0, four_source_relaxed},
      {3, "Dempster combination vs enumeration oracle", 10, dempster_oracle},
      {4, "LARS path vs coordinate-descent lasso", 60, lars_oracle},
      {5, "information identities and ranking oracle", 30, information_identities},
      {6, "learner gradient check", 10, gradient_check},
      {7, "fused ensemble beats the best learner", 600, ensemble_beats_best},
      {8, "noise robustness trend", 0, noise_trend},
      {9, "signature band wins the bandwidth sweep", 0, bandwidth_property},
      {10, "determinism across runs and worker counts", 0, [&](Outcome& o) { determinism(o, cli); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.number) == only.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0) o.expect(secs < c.limit_seconds, "took longer than " + fmt(c.limit_seconds, 0) + " s");
    failed += !o.pass;
    std::cout << "criterion " << c.number << " " << (o.pass ? "PASS" : "FAIL") << " " << c.name << ": "
              << o.detail.str() << " [" << fmt(secs, 2) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
