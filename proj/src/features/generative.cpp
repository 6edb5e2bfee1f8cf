#include "features/generative.hpp"

#include "common/error.hpp"

namespace evifuse::features {

const std::vector<std::string>& generated_channel_names() {
  static const std::vector<std::string> names{"x1", "x2", "sum", "prod", "x1sq", "x2sq", "logx1", "logx2"};
  return names;
}

ChannelMap generate_channels(const Matrix& x1, const Matrix& x2) {
  require(x1.rows() == x2.rows() && x1.cols() == x2.cols(), ErrorCode::ShapeMismatch,
          "sensor matrices differ in shape");
  const auto log_floor = [](const Matrix& x) -> Matrix {
    return x.array().max(kLogFloor).log10().matrix();
  };
  ChannelMap out;
  out.emplace("x1", x1);
  out.emplace("x2", x2);
  out.emplace("sum", x1 + x2);
  out.emplace("prod", x1.cwiseProduct(x2));
  out.emplace("x1sq", x1.cwiseProduct(x1));
  out.emplace("x2sq", x2.cwiseProduct(x2));
  out.emplace("logx1", log_floor(x1));
  out.emplace("logx2", log_floor(x2));
  return out;
}

Matrix concatenate(const ChannelMap& channels, const std::vector<std::string>& names) {
  require(!names.empty(), ErrorCode::InvalidArgument, "nothing to concatenate");
  Eigen::Index rows = -1;
  Eigen::Index cols = 0;
  for (const auto& n : names) {
    const auto it = channels.find(n);
    require(it != channels.end(), ErrorCode::InvalidArgument, "unknown channel '" + n + "'");
    require(rows < 0 || it->second.rows() == rows, ErrorCode::ShapeMismatch, "channels differ in sample count");
    rows = it->second.rows();
    cols += it->second.cols();
  }
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& n : names) {
    const auto& m = channels.at(n);
    out.middleCols(at, m.cols()) = m;
    at += m.cols();
  }
  return out;
}

Normalized normalize_minmax(const Matrix& channel, std::optional<MinMax> stats) {
  Normalized out;
  if (stats) {
    out.stats = *stats;
  } else if (channel.size() > 0) {
    out.stats = {channel.minCoeff(), channel.maxCoeff()};
  }
  const double span = out.stats.max - out.stats.min;
  if (!(span > 0.0)) {
    out.values = Matrix::Zero(channel.rows(), channel.cols());
  } else {
    out.values = ((channel.array() - out.stats.min) * (2.0 / span) - 1.0).matrix();
  }
  return out;
}

}  // namespace evifuse::features
