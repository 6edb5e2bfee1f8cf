#pragma once

#include <map>
#include <string>
#include <vector>

#include "features/lars.hpp"
#include "features/spectrum.hpp"

namespace evifuse::features {

struct ChannelSelection {
  std::vector<std::size_t> indices;  // ascending
  std::vector<double> coefficients;  // end-of-path coefficient per index
  std::vector<std::size_t> excluded;
};

struct FrequencySelection {
  std::map<std::string, ChannelSelection> channels;
  // De-duplicated union across channels, ascending.
  std::vector<std::size_t> union_indices;
};

// Regression target used for selection: -1/+1 for two classes (class 0 is
// -1), the raw class index otherwise.
Eigen::VectorXd selection_target(const infotheory::LabelVector& labels);

// Runs the lasso path to its end on every channel independently.
FrequencySelection select_frequencies(const ChannelMap& channels, const infotheory::LabelVector& labels);
FrequencySelection select_frequencies(const SpectrumDataset& dataset);

// `channel,frequency_index,frequency_hz,coefficient`
std::string format_selection_csv(const FrequencySelection& selection, const std::vector<double>& frequencies);

}  // namespace evifuse::features
