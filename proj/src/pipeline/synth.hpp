#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "features/spectrum.hpp"

namespace evifuse::pipeline {

struct SynthConfig {
  int n_healthy = 60;
  int n_defected = 30;
  int n_f = 1024;
  std::uint64_t seed = 0;

  // Mode count is drawn uniformly from [min_modes, max_modes].
  int min_modes = 8;
  int max_modes = 15;
  double f_min_hz = 3000.0;
  double f_max_hz = 38000.0;

  double loss_factor = 0.01;
  // Part-to-part scatter: relative std of modal frequencies and loss factors.
  double frequency_scatter = 0.001;
  double damping_scatter = 0.05;

  // Defects lower a random subset of modal frequencies by a relative amount
  // in [shift_min, shift_max] and scale the loss factor by up to
  // (1 +/- damping_perturbation).
  double shift_min = 0.005;
  double shift_max = 0.02;
  double damping_perturbation = 0.5;
  double defect_mode_probability = 0.35;

  // Confines the defect signature to modes inside [lo, hi] Hz; at least
  // `band_modes` modes are placed there.
  std::optional<double> defect_band_lo_hz;
  std::optional<double> defect_band_hi_hz;
  int band_modes = 2;

  // Relative multiplicative measurement noise per frequency line.
  double measurement_noise = 0.01;

  void validate() const;
};

struct ModalSample {
  std::vector<double> frequencies_hz;
  std::vector<double> loss_factors;
};

struct SynthResult {
  features::SpectrumDataset dataset;
  std::vector<ModalSample> modes;  // per sample
};

// Two-sensor |FRF| magnitudes from a modal superposition
//   |sum_k r_k / (w_k^2 - w^2 + i eta_k w_k^2)|
// with per-sensor residues. Channels are named "x1" and "x2"; class 0 is
// healthy, class 1 defected.
SynthResult synthesize(const SynthConfig& cfg);

features::SpectrumDataset synthesize_frf_dataset(int n_healthy, int n_defected, int n_f, std::uint64_t seed);

}  // namespace evifuse::pipeline
