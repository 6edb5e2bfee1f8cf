#include "evidence/frame.hpp"

#include <set>

#include "common/error.hpp"

namespace evifuse::evidence {

Frame::Frame(std::vector<std::string> labels) : labels_(std::move(labels)) {
  require(!labels_.empty(), ErrorCode::InvalidArgument, "frame needs at least one label");
  require(labels_.size() <= kMaxSize, ErrorCode::InvalidArgument, "frame larger than 64 labels");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    require(!l.empty(), ErrorCode::InvalidArgument, "empty frame label");
    require(seen.insert(l).second, ErrorCode::InvalidArgument, "duplicate frame label '" + l + "'");
  }
}

FramePtr make_frame(std::vector<std::string> labels) {
  return std::make_shared<const Frame>(std::move(labels));
}

FramePtr make_indexed_frame(std::size_t k) {
  std::vector<std::string> labels;
  labels.reserve(k);
  for (std::size_t i = 0; i < k; ++i) labels.push_back("E" + std::to_string(i + 1));
  return make_frame(std::move(labels));
}

bool same_frame(const FramePtr& a, const FramePtr& b) noexcept {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

std::vector<std::size_t> FocalSet::members() const {
  std::vector<std::size_t> out;
  for (auto bits = bits_; bits != 0; bits &= bits - 1)
    out.push_back(static_cast<std::size_t>(std::countr_zero(bits)));
  return out;
}

}  // namespace evifuse::evidence
