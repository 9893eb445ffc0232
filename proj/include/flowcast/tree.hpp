#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "flowcast/matrix.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

struct TreeNode {
    bool leaf = true;
    std::size_t feature = 0;
    double threshold = 0.0;  // x[feature] <= threshold goes left
    double value = 0.0;      // leaf prediction
    std::size_t left = 0;
    std::size_t right = 0;
};

/// CART regression tree: greedy squared-error-reduction splits, candidate
/// thresholds at midpoints of consecutive distinct sorted values, ties broken
/// by lowest feature index then lowest threshold. Nodes are stored in
/// preorder with the root at index 0.
struct RegressionTree {
    std::vector<TreeNode> nodes;

    double predict(const std::vector<double>& x) const;
    double predict_row(const double* x, std::size_t width) const;
};

inline constexpr std::size_t kUnlimitedDepth = std::numeric_limits<std::size_t>::max();

RegressionTree tree_fit(const Matrix& x, const std::vector<double>& y, std::size_t max_depth,
                        std::size_t min_samples_leaf = 1);

/// tree_fit over a row subset (repeats allowed, e.g. a bootstrap resample).
/// When feature_rng is given, each split considers a fresh random subset of
/// max_features columns.
RegressionTree tree_fit_rows(const Matrix& x, const std::vector<double>& y,
                             const std::vector<std::size_t>& rows, std::size_t max_depth,
                             std::size_t min_samples_leaf, std::size_t max_features = 0,
                             SeededRng* feature_rng = nullptr);

}  // namespace flowcast
