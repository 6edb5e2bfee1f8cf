#include "evidence/bba.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "common/error.hpp"

namespace evifuse::evidence {

Bba::Bba(FramePtr frame, std::vector<FocalMass> masses) : frame_(std::move(frame)) {
  require(frame_ != nullptr, ErrorCode::InvalidArgument, "bba without frame");
  const auto full = FocalSet::full(frame_->size());
  std::map<FocalSet, double> merged;
  for (const auto& fm : masses) {
    require(!fm.set.empty(), ErrorCode::InvalidBba, "mass assigned to the empty set");
    require((fm.set.bits() & ~full.bits()) == 0, ErrorCode::InvalidBba, "focal set outside the frame");
    require(std::isfinite(fm.mass), ErrorCode::InvalidBba, "non-finite mass");
    require(fm.mass >= -1e-12, ErrorCode::InvalidBba, "negative mass");
    merged[fm.set] += fm.mass;
  }
  double total = 0.0;
  for (const auto& [set, mass] : merged) {
    if (mass > kDropThreshold) {
      focal_.push_back({set, mass});
      total += mass;
    }
  }
  require(!focal_.empty(), ErrorCode::InvalidBba, "bba has no focal element");
  require(std::abs(total - 1.0) <= kSumTolerance, ErrorCode::InvalidBba,
          "masses sum to " + std::to_string(total));
}

Bba Bba::vacuous(FramePtr frame) {
  const auto k = frame->size();
  return Bba(std::move(frame), {{FocalSet::full(k), 1.0}});
}

Bba Bba::certain(FramePtr frame, std::size_t index) {
  require(index < frame->size(), ErrorCode::IndexOutOfRange, "class index outside the frame");
  return Bba(std::move(frame), {{FocalSet::singleton(index), 1.0}});
}

Bba Bba::from_singletons(FramePtr frame, std::span<const double> masses) {
  require(masses.size() == frame->size(), ErrorCode::LengthMismatch, "singleton vector length differs from frame size");
  std::vector<FocalMass> fm;
  double total = 0.0;
  for (std::size_t k = 0; k < masses.size(); ++k) {
    fm.push_back({FocalSet::singleton(k), masses[k]});
    total += masses[k];
  }
  const double rest = 1.0 - total;
  if (rest > kDropThreshold) fm.push_back({FocalSet::full(frame->size()), rest});
  return Bba(std::move(frame), std::move(fm));
}

double Bba::mass(FocalSet set) const noexcept {
  auto it = std::lower_bound(focal_.begin(), focal_.end(), set,
                             [](const FocalMass& fm, FocalSet s) { return fm.set < s; });
  return (it != focal_.end() && it->set == set) ? it->mass : 0.0;
}

bool Bba::is_bayesian() const noexcept {
  return std::all_of(focal_.begin(), focal_.end(), [](const FocalMass& fm) { return fm.set.is_singleton(); });
}

std::vector<double> Bba::singleton_masses() const {
  std::vector<double> out(frame_size(), 0.0);
  for (const auto& fm : focal_)
    if (fm.set.is_singleton()) out[fm.set.first()] = fm.mass;
  return out;
}

bool Bba::operator==(const Bba& other) const {
  return same_frame(frame_, other.frame_) && focal_ == other.focal_;
}

std::vector<FocalSet> focal_union(std::span<const Bba* const> bbas) {
  std::vector<FocalSet> sets;
  for (const auto* m : bbas)
    for (const auto& fm : m->focal()) sets.push_back(fm.set);
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return sets;
}

std::vector<FocalSet> focal_union(const Bba& a, const Bba& b) {
  const Bba* both[] = {&a, &b};
  return focal_union(both);
}

bool approx_equal(const Bba& a, const Bba& b, double tol) {
  if (!same_frame(a.frame(), b.frame())) return false;
  for (auto set : focal_union(a, b))
    if (std::abs(a.mass(set) - b.mass(set)) > tol) return false;
  return true;
}

std::string to_debug_string(const Bba& m) {
  std::string out;
  for (const auto& fm : m.focal()) {
    if (!out.empty()) out += ' ';
    out += '{';
    bool first = true;
    for (auto idx : fm.set.members()) {
      if (!first) out += ',';
      out += m.frame()->label(idx);
      first = false;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "}:%.6f", fm.mass);
    out += buf;
  }
  return out;
}

BoeSet::BoeSet(std::vector<Bba> boes) : boes_(std::move(boes)) {
  require(!boes_.empty(), ErrorCode::TooFewBoes, "empty body-of-evidence set");
  for (const auto& m : boes_)
    require(same_frame(m.frame(), boes_.front().frame()), ErrorCode::FrameMismatch,
            "bodies of evidence on different frames");
}

Bba weighted_average(std::span<const Bba> boes, std::span<const double> weights) {
  require(!boes.empty(), ErrorCode::TooFewBoes, "nothing to average");
  require(boes.size() == weights.size(), ErrorCode::LengthMismatch, "one weight per body of evidence");
  std::map<FocalSet, double> acc;
  for (std::size_t i = 0; i < boes.size(); ++i) {
    require(same_frame(boes[i].frame(), boes[0].frame()), ErrorCode::FrameMismatch, "averaging across frames");
    for (const auto& fm : boes[i].focal()) acc[fm.set] += weights[i] * fm.mass;
  }
  std::vector<FocalMass> out;
  double total = 0.0;
  for (const auto& [set, mass] : acc) {
    if (mass < -1e-12) fail(ErrorCode::InvalidWeights, "weighted average has negative mass");
    if (mass > 0.0) {
      out.push_back({set, mass});
      total += mass;
    }
  }
  require(total > 0.0, ErrorCode::InvalidWeights, "weighted average has no mass");
  for (auto& fm : out) fm.mass /= total;
  return Bba(boes[0].frame(), std::move(out));
}

Bba mean_bba(std::span<const Bba> boes) {
  std::vector<double> w(boes.size(), 1.0 / static_cast<double>(boes.size()));
  return weighted_average(boes, w);
}

}  // namespace evifuse::evidence
