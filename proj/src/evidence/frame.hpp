#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace evifuse::evidence {

// Ordered, unique class labels. At most 64 hypotheses so that every subset
// fits a single machine word.
class Frame {
 public:
  static constexpr std::size_t kMaxSize = 64;

  explicit Frame(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  bool operator==(const Frame& other) const noexcept { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
};

using FramePtr = std::shared_ptr<const Frame>;

FramePtr make_frame(std::vector<std::string> labels);

// Frame of size k labelled "E1".."Ek".
FramePtr make_indexed_frame(std::size_t k);

bool same_frame(const FramePtr& a, const FramePtr& b) noexcept;

// A non-empty subset of frame indices stored as a bitmask.
class FocalSet {
 public:
  constexpr FocalSet() = default;
  constexpr explicit FocalSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr FocalSet singleton(std::size_t index) { return FocalSet(std::uint64_t{1} << index); }
  static constexpr FocalSet full(std::size_t frame_size) {
    return FocalSet(frame_size >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << frame_size) - 1);
  }

  constexpr std::uint64_t bits() const noexcept { return bits_; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::size_t cardinality() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(std::size_t index) const noexcept { return (bits_ >> index) & 1U; }
  constexpr bool is_singleton() const noexcept { return std::has_single_bit(bits_); }
  // Lowest member index; meaningful for non-empty sets.
  constexpr std::size_t first() const noexcept { return static_cast<std::size_t>(std::countr_zero(bits_)); }

  constexpr FocalSet operator&(FocalSet o) const noexcept { return FocalSet(bits_ & o.bits_); }
  constexpr FocalSet operator|(FocalSet o) const noexcept { return FocalSet(bits_ | o.bits_); }
  constexpr auto operator<=>(const FocalSet&) const = default;

  std::vector<std::size_t> members() const;

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace evifuse::evidence
