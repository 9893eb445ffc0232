#pragma once

#include <vector>

namespace flowcast {

/// Mean of |predict - real| / real, both in original units. Any |real| at or
/// below 1e-6 is an error (the metric would blow up); the message lists the
/// offending indices.
double relative_error(const std::vector<double>& predict, const std::vector<double>& real);

}  // namespace flowcast
