#include "features/selection.hpp"

#include <algorithm>
#include <set>

#include "common/error.hpp"
#include "common/util.hpp"

namespace evifuse::features {

Eigen::VectorXd selection_target(const infotheory::LabelVector& labels) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
  const bool binary = labels.cardinality() <= 2;
  for (std::size_t i = 0; i < labels.size(); ++i)
    y(static_cast<Eigen::Index>(i)) = binary ? (labels[i] == 0 ? -1.0 : 1.0) : static_cast<double>(labels[i]);
  return y;
}

FrequencySelection select_frequencies(const ChannelMap& channels, const infotheory::LabelVector& labels) {
  const Eigen::VectorXd y = selection_target(labels);
  FrequencySelection out;
  std::set<std::size_t> all;
  for (const auto& [name, m] : channels) {
    require(m.rows() == y.size(), ErrorCode::ShapeMismatch, "channel '" + name + "' sample count differs from labels");
    const auto path = lars_lasso_path(m, y);
    ChannelSelection sel;
    sel.indices = path.final_active;
    sel.excluded = path.excluded;
    for (auto j : sel.indices) sel.coefficients.push_back(path.end().beta(static_cast<Eigen::Index>(j)));
    all.insert(sel.indices.begin(), sel.indices.end());
    out.channels.emplace(name, std::move(sel));
  }
  out.union_indices.assign(all.begin(), all.end());
  return out;
}

FrequencySelection select_frequencies(const SpectrumDataset& dataset) {
  return select_frequencies(dataset.channels, dataset.labels);
}

std::string format_selection_csv(const FrequencySelection& selection, const std::vector<double>& frequencies) {
  std::string out = "channel,frequency_index,frequency_hz,coefficient\n";
  for (const auto& [name, sel] : selection.channels) {
    for (std::size_t i = 0; i < sel.indices.size(); ++i) {
      const auto idx = sel.indices[i];
      out += name + "," + std::to_string(idx) + "," +
             (idx < frequencies.size() ? format_double(frequencies[idx]) : std::string("nan")) + "," +
             format_double(sel.coefficients[i]) + "\n";
    }
  }
  return out;
}

}  // namespace evifuse::features
