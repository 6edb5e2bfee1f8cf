#pragma once

#include <optional>
#include <string>
#include <vector>

#include "features/spectrum.hpp"

namespace evifuse::features {

// Floor applied before taking logarithms.
inline constexpr double kLogFloor = 1e-12;

// Names of the eight generated channels, in canonical order.
const std::vector<std::string>& generated_channel_names();

// x1, x2, x1+x2, x1*x2, x1^2, x2^2, log10(x1), log10(x2) (element-wise).
ChannelMap generate_channels(const Matrix& x1, const Matrix& x2);

// Side-by-side concatenation of the given channels' columns (the "all" input).
Matrix concatenate(const ChannelMap& channels, const std::vector<std::string>& names);

struct MinMax {
  double min = 0.0;
  double max = 0.0;
};

struct Normalized {
  Matrix values;
  MinMax stats;
};

// 2 (x - min) / (max - min) - 1 with a channel-global min/max. Given stats are
// reused verbatim (no clipping); a constant channel maps to zeros.
Normalized normalize_minmax(const Matrix& channel, std::optional<MinMax> stats = std::nullopt);

}  // namespace evifuse::features
