#pragma once

#include <initializer_list>

#include "infotheory/label_vector.hpp"

namespace evifuse::infotheory {

// All measures use empirical plug-in frequencies and base-2 logarithms.

double entropy(const LabelVector& x);

// H of the tuple variable formed by the given vectors.
double joint_entropy(std::initializer_list<const LabelVector*> vars);

double mutual_information(const LabelVector& x, const LabelVector& y);

// I(x; y | z) = H(x|z) - H(x|y,z).
double conditional_mi(const LabelVector& x, const LabelVector& y, const LabelVector& z);

// JMI(x, w; y) = I(x; y | w) + I(w; y).
double joint_mi(const LabelVector& x, const LabelVector& w, const LabelVector& y);

}  // namespace evifuse::infotheory
