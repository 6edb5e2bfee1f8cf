#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "features/spectrum.hpp"

namespace evifuse::pipeline {

using features::SpectrumDataset;

struct Split {
  SpectrumDataset train;
  SpectrumDataset validation;
};

// Stratified by class: floor(n_c * fraction) samples of each class go to
// training (clamped to [1, n_c - 1]), the rest to validation.
Split split_train_validation(const SpectrumDataset& dataset, double fraction, std::uint64_t seed);

// Upsamples every smaller class with replacement until all classes match the
// largest one. Duplicates keep their original sample ids.
SpectrumDataset oversample_minority(const SpectrumDataset& train, std::uint64_t seed);

struct NoisyDataset {
  SpectrumDataset dataset;
  double nsr_percent = 0.0;
  // -20 log10(nsr / 100); +inf for a noise-free copy.
  double snr_db = 0.0;
};

double snr_db_from_nsr(double nsr_percent);

// Additive white Gaussian noise per (sample, channel) row. Magnitudes are
// floored at zero, and the noise is scaled so that the realized difference
// after flooring has an RMS of nsr% of that row's RMS.
NoisyDataset add_noise(const SpectrumDataset& dataset, double nsr_percent, std::uint64_t seed);

struct BandSection {
  std::size_t index = 0;
  std::size_t begin = 0;  // first frequency line
  std::size_t end = 0;    // one past the last
  double start_hz = 0.0;
  SpectrumDataset dataset;
};

// Contiguous sections of near-equal length; leading sections take the extra
// lines when n_f is not divisible.
std::vector<BandSection> bandwidth_split(const SpectrumDataset& dataset, std::size_t n_sections);

// Long-format CSV: `# frequencies_hz: ...`, `# classes: ...`, then
// `sample_id,label,ch,f_0,...` with one row per (sample, channel).
std::string format_dataset_csv(const SpectrumDataset& dataset);
SpectrumDataset parse_dataset_csv(std::string_view text);

}  // namespace evifuse::pipeline
