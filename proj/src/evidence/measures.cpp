#include "evidence/measures.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "common/error.hpp"

namespace evifuse::evidence {
namespace {

void require_same_frame(const Bba& a, const Bba& b) {
  require(same_frame(a.frame(), b.frame()), ErrorCode::FrameMismatch, "bodies of evidence on different frames");
}

double jaccard(FocalSet a, FocalSet b) {
  return static_cast<double>((a & b).cardinality()) / static_cast<double>((a | b).cardinality());
}

}  // namespace

double conflict_k(const Bba& m1, const Bba& m2) {
  require_same_frame(m1, m2);
  double k = 0.0;
  for (const auto& a : m1.focal())
    for (const auto& b : m2.focal())
      if ((a.set & b.set).empty()) k += a.mass * b.mass;
  return k;
}

Bba combine_dempster(const Bba& m1, const Bba& m2) {
  require_same_frame(m1, m2);
  std::map<FocalSet, double> joint;
  double k = 0.0;
  for (const auto& a : m1.focal()) {
    for (const auto& b : m2.focal()) {
      const auto inter = a.set & b.set;
      const double p = a.mass * b.mass;
      if (inter.empty())
        k += p;
      else
        joint[inter] += p;
    }
  }
  if (k >= kTotalConflictThreshold) fail(ErrorCode::TotalConflict, "conflict K = " + std::to_string(k));
  const double norm = 1.0 - k;
  std::vector<FocalMass> out;
  out.reserve(joint.size());
  double total = 0.0;
  for (const auto& [set, p] : joint) {
    const double v = p / norm;
    if (v > Bba::kDropThreshold) {
      out.push_back({set, v});
      total += v;
    }
  }
  // Rescale to absorb rounding so chained combinations stay normalized.
  for (auto& fm : out) fm.mass /= total;
  return Bba(m1.frame(), std::move(out));
}

double deng_entropy(const Bba& m) {
  double e = 0.0;
  for (const auto& fm : m.focal()) {
    const double capacity = std::ldexp(1.0, static_cast<int>(fm.set.cardinality())) - 1.0;
    e -= fm.mass * std::log10(fm.mass / capacity);
  }
  return e;
}

double bjs_divergence(const Bba& m1, const Bba& m2) {
  require_same_frame(m1, m2);
  double s = 0.0;
  for (auto set : focal_union(m1, m2)) {
    const double a = m1.mass(set);
    const double b = m2.mass(set);
    const double mid = a + b;
    if (mid <= 0.0) continue;
    if (a > 0.0) s += a * std::log2(2.0 * a / mid);
    if (b > 0.0) s += b * std::log2(2.0 * b / mid);
  }
  return std::max(0.0, 0.5 * s);
}

double jousselme_distance(const Bba& m1, const Bba& m2) {
  require_same_frame(m1, m2);
  const auto sets = focal_union(m1, m2);
  std::vector<double> diff(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) diff[i] = m1.mass(sets[i]) - m2.mass(sets[i]);
  double q = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    q += diff[i] * diff[i];
    for (std::size_t j = i + 1; j < sets.size(); ++j) q += 2.0 * diff[i] * diff[j] * jaccard(sets[i], sets[j]);
  }
  return std::sqrt(std::max(0.0, q));
}

Spread evidence_spread(const BoeSet& boes, std::size_t q) {
  const std::size_t n = boes.size();
  require(n >= 2, ErrorCode::TooFewBoes, "disagreement needs at least two bodies of evidence");
  require(q < n, ErrorCode::IndexOutOfRange, "evidence index " + std::to_string(q) + " out of range");

  Spread out;
  const Bba centre = mean_bba(boes.boes());
  for (const auto& m : boes.boes()) out.sw += jousselme_distance(m, centre);
  out.sw /= static_cast<double>(n);

  std::vector<Bba> rest;
  rest.reserve(n - 1);
  for (std::size_t j = 0; j < n; ++j)
    if (j != q) rest.push_back(boes[j]);
  const Bba centre_without = mean_bba(rest);
  for (const auto& m : rest) out.sw_without += jousselme_distance(m, centre_without);
  out.sw_without /= static_cast<double>(n - 1);
  return out;
}

double disagreement_degree(const BoeSet& boes, std::size_t q, double sigma) {
  require(sigma > 0.0, ErrorCode::InvalidArgument, "sigma must be positive");
  const auto s = evidence_spread(boes, q);
  return 0.5 + std::atan((s.sw - s.sw_without) / sigma) / std::numbers::pi;
}

}  // namespace evifuse::evidence
