#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "flowcast/matrix.hpp"
#include "flowcast/model.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

/// Gate parameters of one LSTM cell. Every gate weight is
/// hidden x (hidden + input) and multiplies the concatenation [h_{t-1}, x_t]
/// (recurrent part first). Biases are 1 x hidden.
struct LstmCellParams {
    std::size_t hidden = 0;
    std::size_t input = 0;
    Matrix w_i, w_f, w_c, w_o;
    Matrix b_i, b_f, b_c, b_o;
};

struct LstmState {
    std::vector<double> cell;
    std::vector<double> hidden;
};

enum class Direction { forward, backward };

/// One gated update:
///   I = sigmoid(W_i [h,x] + b_i), F likewise, O likewise
///   C_t = F . C_{t-1} + I . tanh(W_c [h,x] + b_c)
///   h_t = O . tanh(C_t)
LstmState lstm_cell_step(const LstmCellParams& params, const std::vector<double>& x,
                         const LstmState& prev);

/// Run one cell over a sequence from zero state, forward or reverse order.
/// Output h_t is aligned to the input position t regardless of direction.
std::vector<std::vector<double>> lstm_layer_forward(
    const LstmCellParams& params, const std::vector<std::vector<double>>& inputs,
    Direction direction);

struct LstmConfig {
    // Per-direction width; with the bidirectional default the fused output
    // (and the head) is twice this.
    std::size_t hidden_per_direction = 150;
    bool bidirectional = true;
    // Hidden sizes (per direction) of additional stacked layers. Adjacent
    // layers are connected by trainable transfer matrices.
    std::vector<std::size_t> extra_layers{};
};

namespace detail {

/// Everything one gated update produces, kept for backpropagation.
struct CellStep {
    std::vector<double> concat;  // [h_{t-1}, x_t]
    std::vector<double> gate_i, gate_f, gate_o, cand;
    std::vector<double> cell, tanh_cell, hidden;
};

CellStep step_cell(const LstmCellParams& p, const double* x_part,
                   const std::vector<double>& prev_c, const std::vector<double>& prev_h);

}  // namespace detail

/// Stacked (optionally bidirectional) LSTM with a temporal max-pool over the
/// last layer's outputs and a single linear output unit, trained by full
/// backpropagation through time.
class LstmNetwork : public Model {
public:
    LstmNetwork(std::size_t features, const LstmConfig& config, SeededRng& rng);

    double forward(const Matrix& x) override;
    void backward(double upstream) override;
    double predict(const Matrix& x) const override;
    void zero_grad() override;
    std::vector<ParamRef> params() override;
    std::string kind() const override { return "lstm"; }

    /// Output sequence of the last layer, one fused vector per time step.
    std::vector<std::vector<double>> stacked_forward(const Matrix& x) const;

    std::size_t features() const { return features_; }
    const LstmConfig& config() const { return config_; }
    std::size_t layer_count() const { return layers_.size(); }
    std::size_t output_width() const;

private:
    struct Layer {
        std::size_t input = 0;
        std::size_t hidden = 0;
        std::vector<LstmCellParams> cells;  // [forward] or [forward, backward]
    };
    struct Cache {
        bool valid = false;
        Matrix x;
        // trajs[l][d][s]: cell values of layer l, direction d, processing step s
        std::vector<std::vector<std::vector<detail::CellStep>>> trajs;
        // outs[l][t]: fused per-time output of layer l
        std::vector<std::vector<std::vector<double>>> outs;
        std::vector<double> pooled;
        std::vector<std::size_t> pool_argmax;
    };

    double run(const Matrix& x, Cache& cache) const;

    std::size_t features_;
    LstmConfig config_;
    std::size_t directions_;

    std::vector<Layer> layers_;
    std::vector<Layer> layer_grads_;
    std::vector<Matrix> transfers_;  // transfers_[l]: layer l output -> layer l+1 input
    std::vector<Matrix> transfer_grads_;
    Matrix head_weights_;  // 1 x output_width
    Matrix head_bias_;     // 1x1
    Matrix head_weights_grad_;
    Matrix head_bias_grad_;

    Cache cache_;
};

}  // namespace flowcast
