#include "flowcast/tree.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "flowcast/errors.hpp"

namespace flowcast {

double RegressionTree::predict_row(const double* x, std::size_t width) const {
    if (nodes.empty()) throw UsageError("predict on an empty tree");
    std::size_t i = 0;
    while (!nodes[i].leaf) {
        const TreeNode& n = nodes[i];
        if (n.feature >= width) {
            throw ShapeError("tree expects feature " + std::to_string(n.feature) +
                             ", input has " + std::to_string(width));
        }
        i = x[n.feature] <= n.threshold ? n.left : n.right;
    }
    return nodes[i].value;
}

double RegressionTree::predict(const std::vector<double>& x) const {
    return predict_row(x.data(), x.size());
}

namespace {

struct Builder {
    const Matrix& x;
    const std::vector<double>& y;
    std::size_t max_depth;
    std::size_t min_leaf;
    std::size_t max_features;
    SeededRng* rng;
    std::vector<TreeNode> nodes;
    std::vector<std::size_t> feature_pool;

    std::size_t build(std::vector<std::size_t>& rows, std::size_t depth) {
        const std::size_t idx = nodes.size();
        nodes.emplace_back();

        double sum = 0.0;
        double lo = y[rows[0]];
        double hi = lo;
        for (std::size_t r : rows) {
            sum += y[r];
            lo = std::min(lo, y[r]);
            hi = std::max(hi, y[r]);
        }
        const double mean = sum / static_cast<double>(rows.size());
        nodes[idx].value = mean;

        if (depth >= max_depth || lo == hi || rows.size() < 2 * min_leaf) return idx;

        const std::size_t p = x.cols();
        const std::size_t* features = feature_pool.data();
        std::size_t feature_count = p;
        std::vector<std::size_t> subset;
        if (rng != nullptr && max_features > 0 && max_features < p) {
            subset = feature_pool;
            for (std::size_t i = 0; i < max_features; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(
                                              rng->below(static_cast<std::uint64_t>(p - i)));
                std::swap(subset[i], subset[j]);
            }
            subset.resize(max_features);
            std::sort(subset.begin(), subset.end());
            features = subset.data();
            feature_count = subset.size();
        }

        const std::size_t n = rows.size();
        bool found = false;
        double best_cost = 0.0;
        std::size_t best_feature = 0;
        double best_threshold = 0.0;

        std::vector<std::pair<double, double>> vals(n);  // (feature value, target)
        for (std::size_t fi = 0; fi < feature_count; ++fi) {
            const std::size_t f = features[fi];
            for (std::size_t k = 0; k < n; ++k) {
                vals[k] = {x(rows[k], f), y[rows[k]]};
            }
            std::sort(vals.begin(), vals.end());

            double sum_left = 0.0;
            double sq_left = 0.0;
            double sum_right = 0.0;
            double sq_right = 0.0;
            for (const auto& [v, t] : vals) {
                sum_right += t;
                sq_right += t * t;
            }
            for (std::size_t k = 1; k < n; ++k) {
                const double t = vals[k - 1].second;
                sum_left += t;
                sq_left += t * t;
                sum_right -= t;
                sq_right -= t * t;
                if (vals[k - 1].first == vals[k].first) continue;
                if (k < min_leaf || n - k < min_leaf) continue;
                const double nl = static_cast<double>(k);
                const double nr = static_cast<double>(n - k);
                const double cost =
                    (sq_left - sum_left * sum_left / nl) + (sq_right - sum_right * sum_right / nr);
                if (!found || cost < best_cost) {
                    found = true;
                    best_cost = cost;
                    best_feature = f;
                    best_threshold = vals[k - 1].first + (vals[k].first - vals[k - 1].first) / 2.0;
                }
            }
        }
        if (!found) return idx;

        std::vector<std::size_t> left_rows;
        std::vector<std::size_t> right_rows;
        for (std::size_t r : rows) {
            (x(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        nodes[idx].leaf = false;
        nodes[idx].feature = best_feature;
        nodes[idx].threshold = best_threshold;
        const std::size_t left = build(left_rows, depth + 1);
        const std::size_t right = build(right_rows, depth + 1);
        nodes[idx].left = left;
        nodes[idx].right = right;
        return idx;
    }
};

}  // namespace

RegressionTree tree_fit_rows(const Matrix& x, const std::vector<double>& y,
                             const std::vector<std::size_t>& rows, std::size_t max_depth,
                             std::size_t min_samples_leaf, std::size_t max_features,
                             SeededRng* feature_rng) {
    if (y.size() != x.rows()) {
        throw ShapeError("tree: " + std::to_string(x.rows()) + " rows vs " +
                         std::to_string(y.size()) + " targets");
    }
    if (rows.empty()) throw ArgumentError("tree needs at least one sample");
    if (min_samples_leaf == 0) throw ArgumentError("min_samples_leaf must be at least 1");
    for (std::size_t r : rows) {
        if (r >= x.rows()) throw ArgumentError("tree row index out of range");
    }

    Builder b{x, y, max_depth, min_samples_leaf, max_features, feature_rng, {}, {}};
    b.feature_pool.resize(x.cols());
    std::iota(b.feature_pool.begin(), b.feature_pool.end(), std::size_t{0});
    std::vector<std::size_t> all(rows);
    b.build(all, 0);
    RegressionTree tree;
    tree.nodes = std::move(b.nodes);
    return tree;
}

RegressionTree tree_fit(const Matrix& x, const std::vector<double>& y, std::size_t max_depth,
                        std::size_t min_samples_leaf) {
    std::vector<std::size_t> rows(x.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return tree_fit_rows(x, y, rows, max_depth, min_samples_leaf);
}

}  // namespace flowcast
