#include "pipeline/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "common/util.hpp"

namespace evifuse::pipeline {

void SynthConfig::validate() const {
  require(n_healthy >= 1 && n_defected >= 1, ErrorCode::InvalidCounts, "need at least one sample per class");
  require(n_f >= 16, ErrorCode::InvalidCounts, "need at least 16 frequency lines");
  require(min_modes >= 1 && max_modes >= min_modes, ErrorCode::InvalidCounts, "mode count range must be >= 1");
  require(f_max_hz > f_min_hz && f_min_hz > 0.0, ErrorCode::InvalidArgument, "bad frequency range");
  require(loss_factor > 0.0, ErrorCode::InvalidArgument, "loss factor must be positive");
  require(shift_min >= 0.0 && shift_max >= shift_min && shift_max < 0.5, ErrorCode::InvalidArgument, "bad shift range");
  require(damping_perturbation >= 0.0 && damping_perturbation < 1.0, ErrorCode::InvalidArgument,
          "damping perturbation must be in [0,1)");
  require(defect_mode_probability > 0.0 && defect_mode_probability <= 1.0, ErrorCode::InvalidArgument,
          "defect mode probability must be in (0,1]");
  require(frequency_scatter >= 0.0 && damping_scatter >= 0.0 && measurement_noise >= 0.0,
          ErrorCode::InvalidArgument, "scatter and noise levels must be non-negative");
  require(defect_band_lo_hz.has_value() == defect_band_hi_hz.has_value(), ErrorCode::InvalidArgument,
          "defect band needs both edges");
  if (defect_band_lo_hz) {
    require(*defect_band_hi_hz > *defect_band_lo_hz, ErrorCode::InvalidArgument, "empty defect band");
    require(band_modes >= 1, ErrorCode::InvalidCounts, "defect band needs at least one mode");
  }
}

SynthResult synthesize(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, 0x5e1f));

  // Nominal design: one mode per equal slot of the band, away from slot edges.
  const int n_modes = cfg.min_modes + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.max_modes - cfg.min_modes + 1)));
  const double width = (cfg.f_max_hz - cfg.f_min_hz) / n_modes;
  std::vector<double> nominal;
  for (int k = 0; k < n_modes; ++k) nominal.push_back(cfg.f_min_hz + width * (k + 0.2 + 0.6 * rng.uniform()));

  std::vector<bool> eligible(nominal.size(), true);
  if (cfg.defect_band_lo_hz) {
    const double lo = *cfg.defect_band_lo_hz;
    const double hi = *cfg.defect_band_hi_hz;
    const double margin = 0.5 * (hi - lo) / cfg.band_modes;
    std::erase_if(nominal, [&](double f) { return f > lo - margin && f < hi + margin; });
    for (int j = 0; j < cfg.band_modes; ++j) nominal.push_back(lo + (hi - lo) * (j + 0.5) / cfg.band_modes);
    std::sort(nominal.begin(), nominal.end());
    eligible.assign(nominal.size(), false);
    for (std::size_t k = 0; k < nominal.size(); ++k) eligible[k] = nominal[k] >= lo && nominal[k] <= hi;
  }
  const std::size_t modes = nominal.size();

  // Per-sensor residues, scaled so peak heights are comparable across the band.
  std::vector<double> r1(modes), r2(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    const double f_khz = nominal[k] / 1000.0;
    r1[k] = rng.uniform(0.5, 1.5) * f_khz * f_khz;
    r2[k] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.3, 1.5) * f_khz * f_khz;
  }

  SynthResult out;
  auto& ds = out.dataset;
  const auto n_f = static_cast<Eigen::Index>(cfg.n_f);
  ds.frequencies.resize(static_cast<std::size_t>(cfg.n_f));
  for (Eigen::Index i = 0; i < n_f; ++i)
    ds.frequencies[static_cast<std::size_t>(i)] =
        cfg.f_min_hz + (cfg.f_max_hz - cfg.f_min_hz) * static_cast<double>(i) / static_cast<double>(n_f - 1);

  const int n_s = cfg.n_healthy + cfg.n_defected;
  Eigen::MatrixXd x1(n_s, n_f), x2(n_s, n_f);
  std::vector<int> labels;
  for (int s = 0; s < n_s; ++s) {
    const bool defected = s >= cfg.n_healthy;
    labels.push_back(defected ? 1 : 0);
    char id[32];
    std::snprintf(id, sizeof(id), "%c%04d", defected ? 'd' : 'h', defected ? s - cfg.n_healthy : s);
    ds.sample_ids.emplace_back(id);

    Rng srng(derive_seed(cfg.seed, static_cast<std::uint64_t>(s) + 1));
    ModalSample ms;
    for (std::size_t k = 0; k < modes; ++k) {
      ms.frequencies_hz.push_back(nominal[k] * (1.0 + cfg.frequency_scatter * srng.normal()));
      ms.loss_factors.push_back(cfg.loss_factor * std::max(0.1, 1.0 + cfg.damping_scatter * srng.normal()));
    }
    if (defected) {
      std::vector<std::size_t> candidates;
      for (std::size_t k = 0; k < modes; ++k)
        if (eligible[k]) candidates.push_back(k);
      bool any = false;
      for (auto k : candidates) {
        if (srng.uniform() < cfg.defect_mode_probability) {
          ms.frequencies_hz[k] *= 1.0 - srng.uniform(cfg.shift_min, cfg.shift_max);
          ms.loss_factors[k] *= 1.0 + srng.uniform(-cfg.damping_perturbation, cfg.damping_perturbation);
          any = true;
        }
      }
      if (!any && !candidates.empty()) {
        const auto k = candidates[srng.below(candidates.size())];
        ms.frequencies_hz[k] *= 1.0 - srng.uniform(cfg.shift_min, cfg.shift_max);
        ms.loss_factors[k] *= 1.0 + srng.uniform(-cfg.damping_perturbation, cfg.damping_perturbation);
      }
    }

    for (Eigen::Index i = 0; i < n_f; ++i) {
      const double w = ds.frequencies[static_cast<std::size_t>(i)] / 1000.0;
      std::complex<double> h1{0.0, 0.0}, h2{0.0, 0.0};
      for (std::size_t k = 0; k < modes; ++k) {
        const double wk = ms.frequencies_hz[k] / 1000.0;
        const std::complex<double> denom(wk * wk - w * w, ms.loss_factors[k] * wk * wk);
        h1 += r1[k] / denom;
        h2 += r2[k] / denom;
      }
      x1(s, i) = std::abs(h1) * std::abs(1.0 + cfg.measurement_noise * srng.normal());
      x2(s, i) = std::abs(h2) * std::abs(1.0 + cfg.measurement_noise * srng.normal());
    }
    out.modes.push_back(std::move(ms));
  }
  ds.labels = infotheory::LabelVector(std::move(labels));
  ds.channels.emplace("x1", std::move(x1));
  ds.channels.emplace("x2", std::move(x2));
  return out;
}

features::SpectrumDataset synthesize_frf_dataset(int n_healthy, int n_defected, int n_f, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n_healthy = n_healthy;
  cfg.n_defected = n_defected;
  cfg.n_f = n_f;
  cfg.seed = seed;
  return synthesize(cfg).dataset;
}

}  // namespace evifuse::pipeline
