#include "infotheory/information.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace evifuse::infotheory {

int LabelVector::cardinality() const noexcept {
  return values_.empty() ? 0 : *std::max_element(values_.begin(), values_.end()) + 1;
}

LabelVector pair(const LabelVector& x, const LabelVector& w) {
  require(x.size() == w.size(), ErrorCode::LengthMismatch, "label vectors differ in length");
  const int stride = std::max(w.cardinality(), 1);
  std::vector<int> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * stride + w[i];
  return LabelVector(std::move(out));
}

double joint_entropy(std::initializer_list<const LabelVector*> vars) {
  require(vars.size() > 0, ErrorCode::EmptyInput, "no variables");
  const std::size_t n = (*vars.begin())->size();
  require(n > 0, ErrorCode::EmptyInput, "empty label vector");
  for (const auto* v : vars) require(v->size() == n, ErrorCode::LengthMismatch, "label vectors differ in length");

  std::vector<std::uint64_t> codes(n, 0);
  for (const auto* v : vars) {
    const auto stride = static_cast<std::uint64_t>(std::max(v->cardinality(), 1));
    for (std::size_t i = 0; i < n; ++i) codes[i] = codes[i] * stride + static_cast<std::uint64_t>((*v)[i]);
  }
  std::sort(codes.begin(), codes.end());

  const double total = static_cast<double>(n);
  double h = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && codes[j] == codes[i]) ++j;
    const double p = static_cast<double>(j - i) / total;
    h -= p * std::log2(p);
    i = j;
  }
  return h;
}

double entropy(const LabelVector& x) { return joint_entropy({&x}); }

double mutual_information(const LabelVector& x, const LabelVector& y) {
  require(x.size() == y.size(), ErrorCode::LengthMismatch, "label vectors differ in length");
  return entropy(x) + entropy(y) - joint_entropy({&x, &y});
}

double conditional_mi(const LabelVector& x, const LabelVector& y, const LabelVector& z) {
  require(x.size() == y.size() && x.size() == z.size(), ErrorCode::LengthMismatch, "label vectors differ in length");
  return joint_entropy({&x, &z}) - entropy(z) - joint_entropy({&x, &y, &z}) + joint_entropy({&y, &z});
}

double joint_mi(const LabelVector& x, const LabelVector& w, const LabelVector& y) {
  return conditional_mi(x, y, w) + mutual_information(w, y);
}

}  // namespace evifuse::infotheory
