#pragma once

#include <cstddef>
#include <vector>

#include "flowcast/matrix.hpp"

namespace flowcast {

/// Ordinary least squares on flattened window features.
struct LinearModel {
    std::vector<double> weights;
    double intercept = 0.0;
    // Normal equations were singular and the fit fell back to ridge damping
    // 1e-8; reports must mention it.
    bool ridge_fallback = false;

    double predict(const std::vector<double>& x) const;
};

/// Row-major flattening of a window matrix: row 0's features first.
std::vector<double> flatten_window(const Matrix& x);

/// Least-squares fit with intercept via the normal equations. Requires more
/// rows than columns; a singular system is re-solved with ridge damping and
/// flagged on the result.
LinearModel ols_fit(const Matrix& x, const std::vector<double>& y);

}  // namespace flowcast
