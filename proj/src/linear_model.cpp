#include "flowcast/linear_model.hpp"

#include <cmath>
#include <string>

#include "flowcast/errors.hpp"

namespace flowcast {

namespace {

// Gaussian elimination with partial pivoting on [a | b], in place.
// Returns false when a pivot collapses (singular system).
bool solve_inplace(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const std::size_t m = a.size();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < m; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-12) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < m; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t col = m; col-- > 0;) {
        double acc = b[col];
        for (std::size_t c = col + 1; c < m; ++c) acc -= a[col][c] * b[c];
        b[col] = acc / a[col][col];
    }
    return true;
}

}  // namespace

double LinearModel::predict(const std::vector<double>& x) const {
    if (x.size() != weights.size()) {
        throw ShapeError("linear model: input has " + std::to_string(x.size()) +
                         " features, model has " + std::to_string(weights.size()));
    }
    double acc = intercept;
    for (std::size_t j = 0; j < x.size(); ++j) acc += weights[j] * x[j];
    return acc;
}

std::vector<double> flatten_window(const Matrix& x) {
    return std::vector<double>(x.data(), x.data() + x.size());
}

LinearModel ols_fit(const Matrix& x, const std::vector<double>& y) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    if (y.size() != n) {
        throw ShapeError("ols: " + std::to_string(n) + " rows vs " + std::to_string(y.size()) +
                         " targets");
    }
    if (n <= p) {
        throw ArgumentError("ols needs more rows than features: " + std::to_string(n) +
                            " rows, " + std::to_string(p) + " features");
    }

    // Normal equations on the design [X | 1]; index p is the intercept.
    const std::size_t m = p + 1;
    std::vector<std::vector<double>> ata(m, std::vector<double>(m, 0.0));
    std::vector<double> atb(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = x.row(i);
        for (std::size_t a = 0; a < p; ++a) {
            for (std::size_t b = a; b < p; ++b) ata[a][b] += row[a] * row[b];
            ata[a][p] += row[a];
            atb[a] += row[a] * y[i];
        }
        atb[p] += y[i];
    }
    ata[p][p] = static_cast<double>(n);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < a; ++b) ata[a][b] = ata[b][a];
    }

    LinearModel model;
    std::vector<std::vector<double>> a = ata;
    std::vector<double> b = atb;
    if (!solve_inplace(a, b)) {
        a = ata;
        b = atb;
        for (std::size_t d = 0; d < m; ++d) a[d][d] += 1e-8;
        model.ridge_fallback = true;
        if (!solve_inplace(a, b)) {
            throw DataError("ols: normal equations singular even with ridge damping");
        }
    }
    model.weights.assign(b.begin(), b.begin() + p);
    model.intercept = b[p];
    return model;
}

}  // namespace flowcast
