#include "pipeline/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evifuse::pipeline {

double evaluate_accuracy(const fusion::ScoreMatrix& scores, const infotheory::LabelVector& labels) {
  require(static_cast<std::size_t>(scores.samples()) == labels.size(), ErrorCode::LengthMismatch,
          "score rows and labels differ in length");
  require(!labels.empty(), ErrorCode::EmptyInput, "no samples");
  std::size_t correct = 0;
  for (Eigen::Index s = 0; s < scores.samples(); ++s)
    if (fusion::argmax(scores.scores().row(s)) == labels[static_cast<std::size_t>(s)]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  const auto mid = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  s.min = sorted.front();
  s.max = sorted.back();
  if (sorted.size() > 1) {
    double ss = 0.0;
    for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

}  // namespace evifuse::pipeline
