#include "features/spectrum.hpp"

#include <cmath>

#include "common/error.hpp"

namespace evifuse::features {

void SpectrumDataset::validate(bool require_nonnegative) const {
  const auto n_s = static_cast<Eigen::Index>(sample_ids.size());
  const auto n_f = static_cast<Eigen::Index>(frequencies.size());
  require(labels.size() == sample_ids.size(), ErrorCode::ShapeMismatch, "label count differs from sample count");
  require(!channels.empty(), ErrorCode::InvalidArgument, "dataset has no channels");
  for (std::size_t i = 1; i < frequencies.size(); ++i)
    require(frequencies[i] > frequencies[i - 1], ErrorCode::InvalidArgument, "frequencies not strictly increasing");
  for (const auto& [name, m] : channels) {
    require(m.rows() == n_s && m.cols() == n_f, ErrorCode::ShapeMismatch, "channel '" + name + "' has wrong shape");
    require(m.allFinite(), ErrorCode::InvalidArgument, "channel '" + name + "' has non-finite values");
    if (require_nonnegative)
      require(m.size() == 0 || m.minCoeff() >= 0.0, ErrorCode::InvalidArgument,
              "channel '" + name + "' has negative magnitudes");
  }
  for (std::size_t i = 0; i < labels.size(); ++i)
    require(labels[i] < static_cast<int>(class_names.size()), ErrorCode::InvalidArgument, "label outside class list");
}

SpectrumDataset SpectrumDataset::subset(const std::vector<std::size_t>& rows) const {
  SpectrumDataset out;
  out.frequencies = frequencies;
  out.class_names = class_names;
  std::vector<int> lab;
  lab.reserve(rows.size());
  for (auto r : rows) {
    require(r < sample_ids.size(), ErrorCode::IndexOutOfRange, "sample index out of range");
    lab.push_back(labels[r]);
    out.sample_ids.push_back(sample_ids[r]);
  }
  out.labels = infotheory::LabelVector(std::move(lab));
  for (const auto& [name, m] : channels) {
    Matrix sub(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) sub.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
    out.channels.emplace(name, std::move(sub));
  }
  return out;
}

SpectrumDataset SpectrumDataset::frequency_slice(std::size_t begin, std::size_t end) const {
  require(begin < end && end <= frequencies.size(), ErrorCode::IndexOutOfRange, "bad frequency slice");
  SpectrumDataset out;
  out.frequencies.assign(frequencies.begin() + static_cast<std::ptrdiff_t>(begin),
                         frequencies.begin() + static_cast<std::ptrdiff_t>(end));
  out.labels = labels;
  out.sample_ids = sample_ids;
  out.class_names = class_names;
  const auto b = static_cast<Eigen::Index>(begin);
  const auto w = static_cast<Eigen::Index>(end - begin);
  for (const auto& [name, m] : channels) out.channels.emplace(name, m.middleCols(b, w));
  return out;
}

}  // namespace evifuse::features
