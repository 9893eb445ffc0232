#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "flowcast/matrix.hpp"
#include "flowcast/tree.hpp"

namespace flowcast {

enum class EnsembleKind { gbr, rf };

struct Ensemble {
    EnsembleKind kind = EnsembleKind::gbr;
    std::vector<RegressionTree> trees;
    double learning_rate = 0.1;       // gbr only
    double initial_prediction = 0.0;  // gbr only

    // gbr: initial + lr * sum of tree outputs; rf: mean of tree outputs.
    double predict(const std::vector<double>& x) const;
};

/// Gradient boosting with squared loss: stage 0 predicts mean(y), each stage
/// fits a depth-limited tree to the current residuals.
Ensemble gbr_fit(const Matrix& x, const std::vector<double>& y, std::size_t n_trees = 100,
                 double learning_rate = 0.1, std::size_t max_depth = 3,
                 std::size_t min_samples_leaf = 1);

/// Random forest: each tree is grown on a seeded bootstrap resample (or the
/// full set when bootstrap is off) to pure/min-leaf depth. max_features = 0
/// considers every column at every split.
Ensemble rf_fit(const Matrix& x, const std::vector<double>& y, std::size_t n_trees = 100,
                std::size_t max_features = 0, bool bootstrap = true, std::uint64_t seed = 0,
                std::size_t min_samples_leaf = 1);

}  // namespace flowcast
