#include "flowcast/loss.hpp"

#include <cmath>
#include <string>

#include "flowcast/errors.hpp"

namespace flowcast {

double huber_term(double diff) {
    const double a = std::fabs(diff);
    return a < 1.0 ? 0.5 * diff * diff : a - 0.5;
}

double huber_slope(double diff) {
    if (diff > 1.0) return 1.0;
    if (diff < -1.0) return -1.0;
    return diff;
}

static void check_lengths(std::size_t a, std::size_t b, const char* who) {
    if (a != b) {
        throw ShapeError(std::string(who) + ": lengths differ, " + std::to_string(a) + " vs " +
                         std::to_string(b));
    }
    if (a == 0) throw ArgumentError(std::string(who) + ": empty input");
}

double huber_loss(const std::vector<double>& pred, const std::vector<double>& target) {
    check_lengths(pred.size(), target.size(), "huber_loss");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) sum += huber_term(pred[i] - target[i]);
    return sum / static_cast<double>(pred.size());
}

std::vector<double> huber_grad(const std::vector<double>& pred,
                               const std::vector<double>& target) {
    check_lengths(pred.size(), target.size(), "huber_grad");
    const double inv_n = 1.0 / static_cast<double>(pred.size());
    std::vector<double> g(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) g[i] = huber_slope(pred[i] - target[i]) * inv_n;
    return g;
}

}  // namespace flowcast
