#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "flowcast/matrix.hpp"
#include "flowcast/model.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

/// One convolution kernel spanning the full feature width: weights are H x D
/// where H is the kernel height in days. The bias lives in a 1x1 matrix so
/// every trainable tensor has the same carrier type.
struct ConvKernel {
    std::size_t height = 0;
    Matrix weights;  // height x features
    Matrix bias;     // 1x1

    double bias_value() const { return bias(0, 0); }
};

struct CnnConfig {
    std::vector<std::size_t> kernel_heights{3, 5, 7};
    std::size_t channels_per_height = 100;
    std::size_t conv_stride = 1;
    // pool_height 0 means global pooling: the window covers the whole channel
    // and each channel contributes exactly one fused value.
    std::size_t pool_height = 0;
    std::size_t pool_stride = 1;
};

/// Number of valid windows when sliding a height-H window with the given
/// stride over N rows: floor((N-H)/stride) + 1. Trailing partial windows are
/// dropped.
std::size_t window_count(std::size_t length, std::size_t window, std::size_t stride);

/// Slide `kernel` down the input with step `stride` and apply ReLU to each
/// windowed sum plus bias. Throws ShapeError if the input is shorter than the
/// kernel or the widths differ.
std::vector<double> conv_forward(const Matrix& x, const ConvKernel& kernel, std::size_t stride);

/// Max over each height-pool_height window stepping by pool_stride.
std::vector<double> max_pool(const std::vector<double>& c, std::size_t pool_height,
                             std::size_t pool_stride);

/// Convolutional regression network: one conv layer with several kernel
/// heights, ReLU, per-channel max pooling, concatenation of all pooled
/// values, and a single linear output unit.
class CnnModel : public Model {
public:
    CnnModel(std::size_t features, const CnnConfig& config, SeededRng& rng);

    double forward(const Matrix& x) override;
    void backward(double upstream) override;
    double predict(const Matrix& x) const override;
    void zero_grad() override;
    std::vector<ParamRef> params() override;
    std::string kind() const override { return "cnn"; }

    std::size_t features() const { return features_; }
    const CnnConfig& config() const { return config_; }
    std::size_t fused_width() const { return fused_width_; }
    std::size_t channel_count() const { return kernels_.size(); }

    const std::vector<ConvKernel>& kernels() const { return kernels_; }
    const Matrix& fc_weights() const { return fc_weights_; }
    const Matrix& fc_bias() const { return fc_bias_; }

private:
    struct Cache {
        bool valid = false;
        Matrix x;
        std::vector<std::vector<double>> pre;     // per channel, pre-ReLU sums
        std::vector<std::vector<std::size_t>> argmax;  // per channel, per pooled entry
        std::vector<double> fused;
    };

    double run(const Matrix& x, Cache& cache) const;

    std::size_t features_;
    CnnConfig config_;
    std::size_t fused_width_;

    std::vector<ConvKernel> kernels_;       // heights in config order, channels within height
    std::vector<ConvKernel> kernel_grads_;  // same layout
    Matrix fc_weights_;                     // 1 x fused_width
    Matrix fc_bias_;                        // 1x1
    Matrix fc_weights_grad_;
    Matrix fc_bias_grad_;

    Cache cache_;
};

}  // namespace flowcast
