#include "flowcast/metrics.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "flowcast/errors.hpp"

namespace flowcast {

double relative_error(const std::vector<double>& predict, const std::vector<double>& real) {
    if (predict.size() != real.size()) {
        throw ShapeError("relative error: " + std::to_string(predict.size()) +
                         " predictions vs " + std::to_string(real.size()) + " reals");
    }
    if (predict.empty()) throw ArgumentError("relative error of empty vectors");

    std::string bad;
    std::size_t bad_count = 0;
    for (std::size_t i = 0; i < real.size(); ++i) {
        if (std::abs(real[i]) <= 1e-6) {
            ++bad_count;
            if (bad_count <= 10) {
                if (!bad.empty()) bad += ", ";
                bad += std::to_string(i);
            }
        }
    }
    if (bad_count > 0) {
        if (bad_count > 10) bad += ", ...";
        throw ArgumentError("relative error undefined: |real| <= 1e-6 at " +
                            std::to_string(bad_count) + " index(es): " + bad);
    }

    double sum = 0.0;
    for (std::size_t i = 0; i < real.size(); ++i) {
        sum += std::abs(predict[i] - real[i]) / real[i];
    }
    return sum / static_cast<double>(real.size());
}

}  // namespace flowcast
