#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evidence/frame.hpp"

namespace evifuse::evidence {

struct FocalMass {
  FocalSet set;
  double mass = 0.0;

  bool operator==(const FocalMass&) const = default;
};

// Basic belief assignment. Focal elements are kept sorted by bitmask, carry
// strictly positive mass, and the masses sum to one.
class Bba {
 public:
  static constexpr double kSumTolerance = 1e-9;
  // Entries at or below this are treated as absent.
  static constexpr double kDropThreshold = 1e-15;

  // Validates and canonicalizes: duplicate sets are merged, tiny entries are
  // dropped. Negative masses beyond -1e-12 are rejected.
  Bba(FramePtr frame, std::vector<FocalMass> masses);

  static Bba vacuous(FramePtr frame);
  static Bba certain(FramePtr frame, std::size_t index);
  // One mass per singleton plus the remainder (if any) on the full frame.
  static Bba from_singletons(FramePtr frame, std::span<const double> masses);

  const FramePtr& frame() const noexcept { return frame_; }
  std::size_t frame_size() const noexcept { return frame_->size(); }
  std::span<const FocalMass> focal() const noexcept { return focal_; }
  std::size_t focal_count() const noexcept { return focal_.size(); }

  double mass(FocalSet set) const noexcept;
  double ignorance() const noexcept { return mass(FocalSet::full(frame_size())); }
  bool is_bayesian() const noexcept;
  std::vector<double> singleton_masses() const;

  bool operator==(const Bba& other) const;

 private:
  FramePtr frame_;
  std::vector<FocalMass> focal_;
};

// Mass-by-mass comparison with absolute tolerance over the union of focal sets.
bool approx_equal(const Bba& a, const Bba& b, double tol);

// Union of focal sets, sorted.
std::vector<FocalSet> focal_union(std::span<const Bba* const> bbas);
std::vector<FocalSet> focal_union(const Bba& a, const Bba& b);

// Focal sets in frame-index order, six decimals, e.g. "{E1}:0.500000 {E1,E3}:0.500000".
std::string to_debug_string(const Bba& m);

// An ordered collection of bodies of evidence on one frame.
class BoeSet {
 public:
  explicit BoeSet(std::vector<Bba> boes);

  const FramePtr& frame() const noexcept { return boes_.front().frame(); }
  std::size_t size() const noexcept { return boes_.size(); }
  const Bba& operator[](std::size_t i) const { return boes_.at(i); }
  std::span<const Bba> boes() const noexcept { return boes_; }

 private:
  std::vector<Bba> boes_;
};

// Convex (or affine) combination sum_i w_i m_i. Raises InvalidWeights when a
// resulting mass is below -1e-12; smaller negatives are clipped to zero.
Bba weighted_average(std::span<const Bba> boes, std::span<const double> weights);

Bba mean_bba(std::span<const Bba> boes);

}  // namespace evifuse::evidence
