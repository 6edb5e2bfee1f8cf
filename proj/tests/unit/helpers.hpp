#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "evidence/bba.hpp"
#include "evidence_oracle.hpp"

namespace testing {

using evifuse::evidence::Bba;
using evifuse::evidence::FocalMass;
using evifuse::evidence::FocalSet;
using evifuse::evidence::FramePtr;

inline Bba bayesian(const FramePtr& frame, std::vector<double> p) { return Bba::from_singletons(frame, p); }

// Random Bba with up to `max_focal` focal sets drawn from all non-empty
// subsets of a k-element frame.
inline Bba random_bba(std::mt19937_64& rng, const FramePtr& frame, int max_focal = 4) {
  const auto k = frame->size();
  const std::uint64_t subsets = (std::uint64_t{1} << k) - 1;
  std::uniform_int_distribution<std::uint64_t> pick(1, subsets);
  std::uniform_int_distribution<int> count(1, max_focal);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<FocalMass> fm;
  const int n = count(rng);
  double total = 0;
  for (int i = 0; i < n; ++i) {
    fm.push_back({FocalSet(pick(rng)), u(rng)});
    total += fm.back().mass;
  }
  for (auto& f : fm) f.mass /= total;
  return Bba(frame, fm);
}

inline Bba random_bayesian(std::mt19937_64& rng, const FramePtr& frame) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> p(frame->size());
  double total = 0;
  for (auto& v : p) total += v = u(rng);
  for (auto& v : p) v /= total;
  // Guard the remainder so it does not leak onto the full frame.
  double s = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) s += p[i];
  p.back() = 1.0 - s;
  return Bba::from_singletons(frame, p);
}

inline oracle::Mass to_mass(const Bba& m) {
  oracle::Mass out;
  for (const auto& f : m.focal()) out[f.set.bits()] = f.mass;
  return out;
}

inline double total_mass(const Bba& m) {
  double s = 0;
  for (const auto& f : m.focal()) s += f.mass;
  return s;
}

}  // namespace testing
