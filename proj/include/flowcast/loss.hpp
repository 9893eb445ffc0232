#pragma once

#include <vector>

namespace flowcast {

/// Huber contribution of one residual: 0.5*d^2 inside |d| < 1, |d| - 0.5 outside.
double huber_term(double diff);

/// d(huber_term)/d(diff): diff clipped to [-1, 1].
double huber_slope(double diff);

/// Mean Huber loss over paired vectors. Throws ShapeError on length mismatch.
double huber_loss(const std::vector<double>& pred, const std::vector<double>& target);

/// Gradient of huber_loss with respect to each prediction: clip(diff)/n.
std::vector<double> huber_grad(const std::vector<double>& pred,
                               const std::vector<double>& target);

}  // namespace flowcast
