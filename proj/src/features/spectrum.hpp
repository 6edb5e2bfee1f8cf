#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "infotheory/label_vector.hpp"

namespace evifuse::features {

using Matrix = Eigen::MatrixXd;
// Channel name -> samples x frequencies. Iteration order (by name) is the
// canonical channel order everywhere.
using ChannelMap = std::map<std::string, Matrix>;

// Labelled |FRF| magnitude spectra sharing one frequency axis.
struct SpectrumDataset {
  std::vector<double> frequencies;
  ChannelMap channels;
  infotheory::LabelVector labels;
  std::vector<std::string> sample_ids;
  std::vector<std::string> class_names{"healthy", "defected"};

  std::size_t samples() const noexcept { return sample_ids.size(); }
  std::size_t frequency_count() const noexcept { return frequencies.size(); }

  // Throws ShapeMismatch / InvalidArgument on any broken invariant.
  void validate(bool require_nonnegative = true) const;

  // Rows `rows` of every channel, labels and ids, in the given order.
  SpectrumDataset subset(const std::vector<std::size_t>& rows) const;

  // Columns [begin, end) of the frequency axis.
  SpectrumDataset frequency_slice(std::size_t begin, std::size_t end) const;
};

}  // namespace evifuse::features
