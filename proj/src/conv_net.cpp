#include "flowcast/conv_net.hpp"

#include <algorithm>
#include <cmath>

#include "flowcast/errors.hpp"

namespace flowcast {

std::size_t window_count(std::size_t length, std::size_t window, std::size_t stride) {
    if (stride == 0) throw ArgumentError("window stride must be positive");
    if (window == 0) throw ArgumentError("window height must be positive");
    if (window > length) {
        throw ShapeError("window of height " + std::to_string(window) +
                         " does not fit in length " + std::to_string(length));
    }
    return (length - window) / stride + 1;
}

std::vector<double> conv_forward(const Matrix& x, const ConvKernel& kernel, std::size_t stride) {
    if (kernel.weights.cols() != x.cols()) {
        throw ShapeError("conv_forward: kernel width " + std::to_string(kernel.weights.cols()) +
                         " vs input width " + std::to_string(x.cols()));
    }
    const std::size_t n = window_count(x.rows(), kernel.height, stride);
    std::vector<double> out(n);
    const std::size_t span = kernel.height * x.cols();
    const double b = kernel.bias_value();
    for (std::size_t j = 0; j < n; ++j) {
        const double* w = kernel.weights.data();
        const double* xp = x.row(j * stride);
        double sum = b;
        for (std::size_t i = 0; i < span; ++i) sum += w[i] * xp[i];
        out[j] = sum > 0.0 ? sum : 0.0;
    }
    return out;
}

std::vector<double> max_pool(const std::vector<double>& c, std::size_t pool_height,
                             std::size_t pool_stride) {
    const std::size_t n = window_count(c.size(), pool_height, pool_stride);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t start = i * pool_stride;
        double best = c[start];
        for (std::size_t k = 1; k < pool_height; ++k) best = std::max(best, c[start + k]);
        out[i] = best;
    }
    return out;
}

CnnModel::CnnModel(std::size_t features, const CnnConfig& config, SeededRng& rng)
    : features_(features), config_(config) {
    if (features == 0) throw ArgumentError("CnnModel: feature count must be positive");
    if (config.kernel_heights.empty()) {
        throw ArgumentError("CnnModel: at least one kernel height required");
    }
    if (config.channels_per_height == 0) {
        throw ArgumentError("CnnModel: channels_per_height must be positive");
    }
    if (config.conv_stride == 0 || config.pool_stride == 0) {
        throw ArgumentError("CnnModel: strides must be positive");
    }

    for (std::size_t h : config.kernel_heights) {
        if (h == 0) throw ArgumentError("CnnModel: kernel height must be positive");
        const double bound = std::sqrt(6.0 / static_cast<double>(h * features + 1));
        for (std::size_t c = 0; c < config.channels_per_height; ++c) {
            ConvKernel k;
            k.height = h;
            k.weights = uniform_init(rng, h, features, bound);
            k.bias = Matrix(1, 1);
            kernels_.push_back(std::move(k));
        }
    }

    // With global pooling every channel contributes one fused value. A fixed
    // pool_height would make the fused width depend on the input length, so
    // it is rejected here and handled per-forward instead.
    if (config.pool_height != 0) {
        throw ArgumentError(
            "CnnModel: only global pooling (pool_height 0) keeps the fused width "
            "input-independent; use conv_forward/max_pool directly for other shapes");
    }
    fused_width_ = kernels_.size();

    const double fc_bound = std::sqrt(6.0 / static_cast<double>(fused_width_ + 1));
    fc_weights_ = uniform_init(rng, 1, fused_width_, fc_bound);
    fc_bias_ = Matrix(1, 1);

    kernel_grads_.reserve(kernels_.size());
    for (const ConvKernel& k : kernels_) {
        ConvKernel g;
        g.height = k.height;
        g.weights = Matrix(k.height, features_);
        g.bias = Matrix(1, 1);
        kernel_grads_.push_back(std::move(g));
    }
    fc_weights_grad_ = Matrix(1, fused_width_);
    fc_bias_grad_ = Matrix(1, 1);
}

double CnnModel::run(const Matrix& x, Cache& cache) const {
    if (x.cols() != features_) {
        throw ShapeError("CnnModel: input has " + std::to_string(x.cols()) +
                         " features, model expects " + std::to_string(features_));
    }
    cache.x = x;
    cache.pre.assign(kernels_.size(), {});
    cache.argmax.assign(kernels_.size(), {});
    cache.fused.clear();
    cache.fused.reserve(fused_width_);

    const std::size_t stride = config_.conv_stride;
    for (std::size_t k = 0; k < kernels_.size(); ++k) {
        const ConvKernel& kernel = kernels_[k];
        const std::size_t n = window_count(x.rows(), kernel.height, stride);
        std::vector<double>& pre = cache.pre[k];
        pre.resize(n);
        const std::size_t span = kernel.height * features_;
        const double b = kernel.bias_value();
        for (std::size_t j = 0; j < n; ++j) {
            const double* w = kernel.weights.data();
            const double* xp = x.row(j * stride);
            double sum = b;
            for (std::size_t i = 0; i < span; ++i) sum += w[i] * xp[i];
            pre[j] = sum;
        }
        // global max pool over the ReLU-activated channel
        std::size_t best = 0;
        double best_val = pre[0] > 0.0 ? pre[0] : 0.0;
        for (std::size_t j = 1; j < n; ++j) {
            const double a = pre[j] > 0.0 ? pre[j] : 0.0;
            if (a > best_val) {
                best_val = a;
                best = j;
            }
        }
        cache.argmax[k].assign(1, best);
        cache.fused.push_back(best_val);
    }

    double y = fc_bias_(0, 0);
    const double* wf = fc_weights_.data();
    for (std::size_t i = 0; i < fused_width_; ++i) y += wf[i] * cache.fused[i];
    cache.valid = true;
    return y;
}

double CnnModel::forward(const Matrix& x) { return run(x, cache_); }

double CnnModel::predict(const Matrix& x) const {
    Cache scratch;
    return run(x, scratch);
}

void CnnModel::backward(double upstream) {
    if (!cache_.valid) throw UsageError("CnnModel::backward called without a cached forward pass");

    fc_bias_grad_(0, 0) += upstream;
    double* dwf = fc_weights_grad_.data();
    const double* wf = fc_weights_.data();
    const std::size_t stride = config_.conv_stride;

    for (std::size_t k = 0; k < kernels_.size(); ++k) {
        dwf[k] += upstream * cache_.fused[k];
        // max pool routes the gradient to the argmax position only;
        // ReLU gates it off when the winning pre-activation is not positive
        const std::size_t j = cache_.argmax[k][0];
        if (cache_.pre[k][j] <= 0.0) continue;
        const double dz = upstream * wf[k];
        ConvKernel& g = kernel_grads_[k];
        g.bias(0, 0) += dz;
        double* gw = g.weights.data();
        const double* xp = cache_.x.row(j * stride);
        const std::size_t span = kernels_[k].height * features_;
        for (std::size_t i = 0; i < span; ++i) gw[i] += dz * xp[i];
    }
}

void CnnModel::zero_grad() {
    for (ConvKernel& g : kernel_grads_) {
        g.weights.fill(0.0);
        g.bias.fill(0.0);
    }
    fc_weights_grad_.fill(0.0);
    fc_bias_grad_.fill(0.0);
}

std::vector<ParamRef> CnnModel::params() {
    std::vector<ParamRef> out;
    out.reserve(2 * kernels_.size() + 2);
    std::size_t idx = 0;
    for (std::size_t h_i = 0; h_i < config_.kernel_heights.size(); ++h_i) {
        const std::string prefix = "conv.h" + std::to_string(config_.kernel_heights[h_i]);
        for (std::size_t c = 0; c < config_.channels_per_height; ++c, ++idx) {
            const std::string base = prefix + ".c" + std::to_string(c);
            out.push_back({base + ".weight", &kernels_[idx].weights, &kernel_grads_[idx].weights});
            out.push_back({base + ".bias", &kernels_[idx].bias, &kernel_grads_[idx].bias});
        }
    }
    out.push_back({"fc.weight", &fc_weights_, &fc_weights_grad_});
    out.push_back({"fc.bias", &fc_bias_, &fc_bias_grad_});
    return out;
}

}  // namespace flowcast
