#pragma once

#include <span>
#include <vector>

#include "fusion/score_matrix.hpp"
#include "infotheory/label_vector.hpp"

namespace evifuse::pipeline {

// Fraction of rows whose argmax (ties to the lowest class) equals the label.
double evaluate_accuracy(const fusion::ScoreMatrix& scores, const infotheory::LabelVector& labels);

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for fewer than two values
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

}  // namespace evifuse::pipeline
