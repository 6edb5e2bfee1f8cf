#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "common/error.hpp"

namespace evifuse::infotheory {

// Discrete observations (class indices) of one variable over n samples.
class LabelVector {
 public:
  LabelVector() = default;
  explicit LabelVector(std::vector<int> values) : values_(std::move(values)) {
    for (int v : values_) require(v >= 0, ErrorCode::InvalidArgument, "negative label");
  }
  LabelVector(std::initializer_list<int> values) : LabelVector(std::vector<int>(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  int operator[](std::size_t i) const { return values_[i]; }
  std::span<const int> values() const noexcept { return values_; }
  // One past the largest value; 0 for an empty vector.
  int cardinality() const noexcept;

  bool operator==(const LabelVector&) const = default;

 private:
  std::vector<int> values_;
};

// The paired variable (x, w) as a single label.
LabelVector pair(const LabelVector& x, const LabelVector& w);

}  // namespace evifuse::infotheory
