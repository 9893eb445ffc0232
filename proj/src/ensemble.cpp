#include "flowcast/ensemble.hpp"

#include <numeric>
#include <string>

#include "flowcast/errors.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

double Ensemble::predict(const std::vector<double>& x) const {
    if (kind == EnsembleKind::gbr) {
        double acc = initial_prediction;
        for (const RegressionTree& t : trees) acc += learning_rate * t.predict(x);
        return acc;
    }
    if (trees.empty()) throw UsageError("random forest has no trees");
    double acc = 0.0;
    for (const RegressionTree& t : trees) acc += t.predict(x);
    return acc / static_cast<double>(trees.size());
}

Ensemble gbr_fit(const Matrix& x, const std::vector<double>& y, std::size_t n_trees,
                 double learning_rate, std::size_t max_depth, std::size_t min_samples_leaf) {
    const std::size_t n = x.rows();
    if (y.size() != n) {
        throw ShapeError("gbr: " + std::to_string(n) + " rows vs " + std::to_string(y.size()) +
                         " targets");
    }
    if (n < 2) throw ArgumentError("gbr needs at least 2 samples");

    Ensemble e;
    e.kind = EnsembleKind::gbr;
    e.learning_rate = learning_rate;
    e.initial_prediction =
        std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);

    std::vector<double> residual(n);
    std::vector<double> current(n, e.initial_prediction);
    for (std::size_t t = 0; t < n_trees; ++t) {
        for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - current[i];
        RegressionTree tree = tree_fit(x, residual, max_depth, min_samples_leaf);
        for (std::size_t i = 0; i < n; ++i) {
            current[i] += learning_rate * tree.predict_row(x.row(i), x.cols());
        }
        e.trees.push_back(std::move(tree));
    }
    return e;
}

Ensemble rf_fit(const Matrix& x, const std::vector<double>& y, std::size_t n_trees,
                std::size_t max_features, bool bootstrap, std::uint64_t seed,
                std::size_t min_samples_leaf) {
    const std::size_t n = x.rows();
    if (y.size() != n) {
        throw ShapeError("rf: " + std::to_string(n) + " rows vs " + std::to_string(y.size()) +
                         " targets");
    }
    if (n == 0) throw ArgumentError("rf needs at least one sample");
    if (n_trees == 0) throw ArgumentError("rf needs at least one tree");

    Ensemble e;
    e.kind = EnsembleKind::rf;
    SeededRng master(seed);
    for (std::size_t t = 0; t < n_trees; ++t) {
        SeededRng tree_rng = master.derive(t);
        std::vector<std::size_t> rows(n);
        if (bootstrap) {
            for (std::size_t i = 0; i < n; ++i) {
                rows[i] = static_cast<std::size_t>(
                    tree_rng.below(static_cast<std::uint64_t>(n)));
            }
        } else {
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }
        e.trees.push_back(tree_fit_rows(x, y, rows, kUnlimitedDepth, min_samples_leaf,
                                        max_features, &tree_rng));
    }
    return e;
}

}  // namespace flowcast
