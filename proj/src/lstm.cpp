#include "flowcast/lstm.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"

namespace flowcast {

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

void check_cell(const LstmCellParams& p) {
    const std::size_t h = p.hidden;
    const std::size_t w = p.hidden + p.input;
    const Matrix* weights[] = {&p.w_i, &p.w_f, &p.w_c, &p.w_o};
    const Matrix* biases[] = {&p.b_i, &p.b_f, &p.b_c, &p.b_o};
    for (const Matrix* m : weights) {
        if (m->rows() != h || m->cols() != w) {
            throw ShapeError("lstm cell: gate weight is " + m->shape_str() + ", expected " +
                             std::to_string(h) + "x" + std::to_string(w));
        }
    }
    for (const Matrix* b : biases) {
        if (b->rows() != 1 || b->cols() != h) {
            throw ShapeError("lstm cell: gate bias is " + b->shape_str() + ", expected 1x" +
                             std::to_string(h));
        }
    }
}

}  // namespace

namespace detail {

CellStep step_cell(const LstmCellParams& p, const double* x_part,
                   const std::vector<double>& prev_c, const std::vector<double>& prev_h) {
    const std::size_t h = p.hidden;
    const std::size_t width = p.hidden + p.input;
    CellStep cs;
    cs.concat.resize(width);
    for (std::size_t j = 0; j < h; ++j) cs.concat[j] = prev_h[j];
    for (std::size_t j = 0; j < p.input; ++j) cs.concat[h + j] = x_part[j];

    cs.gate_i.resize(h);
    cs.gate_f.resize(h);
    cs.gate_o.resize(h);
    cs.cand.resize(h);
    cs.cell.resize(h);
    cs.tanh_cell.resize(h);
    cs.hidden.resize(h);

    for (std::size_t r = 0; r < h; ++r) {
        double zi = p.b_i(0, r);
        double zf = p.b_f(0, r);
        double zc = p.b_c(0, r);
        double zo = p.b_o(0, r);
        const double* wi = p.w_i.row(r);
        const double* wf = p.w_f.row(r);
        const double* wc = p.w_c.row(r);
        const double* wo = p.w_o.row(r);
        for (std::size_t c = 0; c < width; ++c) {
            const double v = cs.concat[c];
            zi += wi[c] * v;
            zf += wf[c] * v;
            zc += wc[c] * v;
            zo += wo[c] * v;
        }
        cs.gate_i[r] = sigmoid(zi);
        cs.gate_f[r] = sigmoid(zf);
        cs.gate_o[r] = sigmoid(zo);
        cs.cand[r] = std::tanh(zc);
        cs.cell[r] = cs.gate_f[r] * prev_c[r] + cs.gate_i[r] * cs.cand[r];
        cs.tanh_cell[r] = std::tanh(cs.cell[r]);
        cs.hidden[r] = cs.gate_o[r] * cs.tanh_cell[r];
    }
    return cs;
}

}  // namespace detail

LstmState lstm_cell_step(const LstmCellParams& params, const std::vector<double>& x,
                         const LstmState& prev) {
    check_cell(params);
    if (x.size() != params.input) {
        throw ShapeError("lstm cell: input has " + std::to_string(x.size()) +
                         " entries, expected " + std::to_string(params.input));
    }
    if (prev.cell.size() != params.hidden || prev.hidden.size() != params.hidden) {
        throw ShapeError("lstm cell: state width " + std::to_string(prev.cell.size()) + "/" +
                         std::to_string(prev.hidden.size()) + ", expected " +
                         std::to_string(params.hidden));
    }
    detail::CellStep cs = detail::step_cell(params, x.data(), prev.cell, prev.hidden);
    return LstmState{std::move(cs.cell), std::move(cs.hidden)};
}

std::vector<std::vector<double>> lstm_layer_forward(
    const LstmCellParams& params, const std::vector<std::vector<double>>& inputs,
    Direction direction) {
    check_cell(params);
    if (inputs.empty()) throw ArgumentError("lstm layer: empty input sequence");
    const std::size_t n = inputs.size();
    for (std::size_t t = 0; t < n; ++t) {
        if (inputs[t].size() != params.input) {
            throw ShapeError("lstm layer: input " + std::to_string(t) + " has " +
                             std::to_string(inputs[t].size()) + " entries, expected " +
                             std::to_string(params.input));
        }
    }
    std::vector<std::vector<double>> out(n);
    std::vector<double> c(params.hidden, 0.0);
    std::vector<double> h(params.hidden, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        const std::size_t t = direction == Direction::forward ? s : n - 1 - s;
        detail::CellStep cs = detail::step_cell(params, inputs[t].data(), c, h);
        c = cs.cell;
        h = cs.hidden;
        out[t] = std::move(cs.hidden);
    }
    return out;
}

LstmNetwork::LstmNetwork(std::size_t features, const LstmConfig& config, SeededRng& rng)
    : features_(features),
      config_(config),
      directions_(config.bidirectional ? 2u : 1u) {
    if (features_ == 0) throw ArgumentError("lstm: feature count must be positive");
    if (config_.hidden_per_direction == 0) {
        throw ArgumentError("lstm: hidden size must be positive");
    }
    for (std::size_t h : config_.extra_layers) {
        if (h == 0) throw ArgumentError("lstm: stacked layer sizes must be positive");
    }

    std::vector<std::size_t> hidden_sizes{config_.hidden_per_direction};
    hidden_sizes.insert(hidden_sizes.end(), config_.extra_layers.begin(),
                        config_.extra_layers.end());

    for (std::size_t l = 0; l < hidden_sizes.size(); ++l) {
        Layer layer;
        layer.hidden = hidden_sizes[l];
        layer.input = l == 0 ? features_ : hidden_sizes[l];
        const std::size_t width = layer.hidden + layer.input;
        const double bound = std::sqrt(6.0 / static_cast<double>(width + layer.hidden));
        for (std::size_t d = 0; d < directions_; ++d) {
            LstmCellParams p;
            p.hidden = layer.hidden;
            p.input = layer.input;
            p.w_i = uniform_init(rng, layer.hidden, width, bound);
            p.w_f = uniform_init(rng, layer.hidden, width, bound);
            p.w_c = uniform_init(rng, layer.hidden, width, bound);
            p.w_o = uniform_init(rng, layer.hidden, width, bound);
            p.b_i = Matrix(1, layer.hidden);
            p.b_f = Matrix(1, layer.hidden, 1.0);  // open forget gates at the start
            p.b_c = Matrix(1, layer.hidden);
            p.b_o = Matrix(1, layer.hidden);
            layer.cells.push_back(std::move(p));
        }
        layers_.push_back(std::move(layer));
    }

    for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
        const std::size_t rows = directions_ * layers_[l].hidden;
        const std::size_t cols = layers_[l + 1].input;
        const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
        transfers_.push_back(uniform_init(rng, rows, cols, bound));
    }

    const std::size_t out_w = output_width();
    head_weights_ = uniform_init(rng, 1, out_w, std::sqrt(6.0 / static_cast<double>(out_w + 1)));
    head_bias_ = Matrix(1, 1);

    layer_grads_ = layers_;
    for (Layer& layer : layer_grads_) {
        for (LstmCellParams& p : layer.cells) {
            p.w_i.fill(0.0);
            p.w_f.fill(0.0);
            p.w_c.fill(0.0);
            p.w_o.fill(0.0);
            p.b_i.fill(0.0);
            p.b_f.fill(0.0);
            p.b_c.fill(0.0);
            p.b_o.fill(0.0);
        }
    }
    transfer_grads_ = transfers_;
    for (Matrix& m : transfer_grads_) m.fill(0.0);
    head_weights_grad_ = Matrix(1, out_w);
    head_bias_grad_ = Matrix(1, 1);
}

std::size_t LstmNetwork::output_width() const {
    return directions_ * layers_.back().hidden;
}

double LstmNetwork::run(const Matrix& x, Cache& cache) const {
    if (x.rows() == 0) throw ArgumentError("lstm: empty input sequence");
    if (x.cols() != features_) {
        throw ShapeError("lstm: layer 0 input width " + std::to_string(x.cols()) +
                         ", expected " + std::to_string(features_));
    }
    const std::size_t n = x.rows();
    cache.valid = false;
    cache.x = x;
    cache.trajs.assign(layers_.size(), {});
    cache.outs.assign(layers_.size(), {});

    std::vector<std::vector<double>> inputs(n);
    for (std::size_t t = 0; t < n; ++t) {
        inputs[t].assign(x.row(t), x.row(t) + features_);
    }

    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Layer& layer = layers_[l];
        cache.trajs[l].resize(directions_);
        for (std::size_t d = 0; d < directions_; ++d) {
            auto& traj = cache.trajs[l][d];
            traj.reserve(n);
            const std::vector<double> zeros(layer.hidden, 0.0);
            const std::vector<double>* prev_c = &zeros;
            const std::vector<double>* prev_h = &zeros;
            for (std::size_t s = 0; s < n; ++s) {
                const std::size_t t = d == 0 ? s : n - 1 - s;
                traj.push_back(detail::step_cell(layer.cells[d], inputs[t].data(), *prev_c, *prev_h));
                prev_c = &traj.back().cell;
                prev_h = &traj.back().hidden;
            }
        }
        auto& outs = cache.outs[l];
        outs.assign(n, std::vector<double>(directions_ * layer.hidden));
        for (std::size_t t = 0; t < n; ++t) {
            for (std::size_t d = 0; d < directions_; ++d) {
                const std::size_t s = d == 0 ? t : n - 1 - t;
                const auto& h = cache.trajs[l][d][s].hidden;
                for (std::size_t j = 0; j < layer.hidden; ++j) {
                    outs[t][d * layer.hidden + j] = h[j];
                }
            }
        }
        if (l + 1 < layers_.size()) {
            const Matrix& w = transfers_[l];
            const std::size_t next_in = layers_[l + 1].input;
            for (std::size_t t = 0; t < n; ++t) {
                std::vector<double> mapped(next_in, 0.0);
                for (std::size_t j = 0; j < w.rows(); ++j) {
                    const double v = outs[t][j];
                    if (v == 0.0) continue;
                    const double* wr = w.row(j);
                    for (std::size_t i = 0; i < next_in; ++i) mapped[i] += v * wr[i];
                }
                inputs[t] = std::move(mapped);
            }
        }
    }

    const std::size_t out_w = output_width();
    const auto& last = cache.outs.back();
    cache.pooled.assign(out_w, 0.0);
    cache.pool_argmax.assign(out_w, 0);
    for (std::size_t i = 0; i < out_w; ++i) {
        double best = last[0][i];
        std::size_t best_t = 0;
        for (std::size_t t = 1; t < n; ++t) {
            if (last[t][i] > best) {
                best = last[t][i];
                best_t = t;
            }
        }
        cache.pooled[i] = best;
        cache.pool_argmax[i] = best_t;
    }

    double y = head_bias_(0, 0);
    for (std::size_t i = 0; i < out_w; ++i) y += head_weights_(0, i) * cache.pooled[i];
    cache.valid = true;
    return y;
}

double LstmNetwork::forward(const Matrix& x) { return run(x, cache_); }

double LstmNetwork::predict(const Matrix& x) const {
    Cache scratch;
    return run(x, scratch);
}

std::vector<std::vector<double>> LstmNetwork::stacked_forward(const Matrix& x) const {
    Cache scratch;
    run(x, scratch);
    return std::move(scratch.outs.back());
}

void LstmNetwork::backward(double upstream) {
    if (!cache_.valid) throw UsageError("lstm backward: no cached forward pass");
    const std::size_t n = cache_.x.rows();
    const std::size_t out_w = output_width();

    head_bias_grad_(0, 0) += upstream;
    std::vector<std::vector<double>> d_out(n, std::vector<double>(out_w, 0.0));
    for (std::size_t i = 0; i < out_w; ++i) {
        head_weights_grad_(0, i) += upstream * cache_.pooled[i];
        d_out[cache_.pool_argmax[i]][i] += upstream * head_weights_(0, i);
    }

    for (std::size_t li = layers_.size(); li-- > 0;) {
        const Layer& layer = layers_[li];
        Layer& grads = layer_grads_[li];
        const std::size_t h = layer.hidden;
        const std::size_t in = layer.input;
        const std::size_t width = h + in;

        std::vector<std::vector<double>> d_in(n, std::vector<double>(in, 0.0));
        std::vector<double> dh(h), dc(h), dzi(h), dzf(h), dzc(h), dzo(h);
        std::vector<double> dconcat(width);
        const std::vector<double> zeros(h, 0.0);

        for (std::size_t d = 0; d < directions_; ++d) {
            const LstmCellParams& p = layer.cells[d];
            LstmCellParams& g = grads.cells[d];
            const auto& traj = cache_.trajs[li][d];
            std::vector<double> dh_carry(h, 0.0);
            std::vector<double> dc_carry(h, 0.0);
            const std::size_t offset = d * h;

            for (std::size_t s = n; s-- > 0;) {
                const std::size_t t = d == 0 ? s : n - 1 - s;
                const detail::CellStep& cs = traj[s];
                const std::vector<double>& prev_c = s == 0 ? zeros : traj[s - 1].cell;

                for (std::size_t j = 0; j < h; ++j) {
                    dh[j] = d_out[t][offset + j] + dh_carry[j];
                    const double tc = cs.tanh_cell[j];
                    const double d_o = dh[j] * tc;
                    dzo[j] = d_o * cs.gate_o[j] * (1.0 - cs.gate_o[j]);
                    dc[j] = dh[j] * cs.gate_o[j] * (1.0 - tc * tc) + dc_carry[j];
                    const double d_f = dc[j] * prev_c[j];
                    dzf[j] = d_f * cs.gate_f[j] * (1.0 - cs.gate_f[j]);
                    const double d_i = dc[j] * cs.cand[j];
                    dzi[j] = d_i * cs.gate_i[j] * (1.0 - cs.gate_i[j]);
                    const double d_g = dc[j] * cs.gate_i[j];
                    dzc[j] = d_g * (1.0 - cs.cand[j] * cs.cand[j]);
                    dc_carry[j] = dc[j] * cs.gate_f[j];
                }

                std::fill(dconcat.begin(), dconcat.end(), 0.0);
                for (std::size_t r = 0; r < h; ++r) {
                    const double gi = dzi[r];
                    const double gf = dzf[r];
                    const double gc = dzc[r];
                    const double go = dzo[r];
                    g.b_i(0, r) += gi;
                    g.b_f(0, r) += gf;
                    g.b_c(0, r) += gc;
                    g.b_o(0, r) += go;
                    double* gwi = g.w_i.row(r);
                    double* gwf = g.w_f.row(r);
                    double* gwc = g.w_c.row(r);
                    double* gwo = g.w_o.row(r);
                    const double* wi = p.w_i.row(r);
                    const double* wf = p.w_f.row(r);
                    const double* wc = p.w_c.row(r);
                    const double* wo = p.w_o.row(r);
                    const double* cv = cs.concat.data();
                    for (std::size_t c = 0; c < width; ++c) {
                        const double v = cv[c];
                        gwi[c] += gi * v;
                        gwf[c] += gf * v;
                        gwc[c] += gc * v;
                        gwo[c] += go * v;
                        dconcat[c] += wi[c] * gi + wf[c] * gf + wc[c] * gc + wo[c] * go;
                    }
                }

                for (std::size_t j = 0; j < h; ++j) dh_carry[j] = dconcat[j];
                for (std::size_t j = 0; j < in; ++j) d_in[t][j] += dconcat[h + j];
            }
        }

        if (li > 0) {
            const Matrix& w = transfers_[li - 1];
            Matrix& wg = transfer_grads_[li - 1];
            const auto& prev_outs = cache_.outs[li - 1];
            std::vector<std::vector<double>> d_prev(n, std::vector<double>(w.rows(), 0.0));
            for (std::size_t t = 0; t < n; ++t) {
                for (std::size_t j = 0; j < w.rows(); ++j) {
                    const double* wr = w.row(j);
                    double* wgr = wg.row(j);
                    const double outv = prev_outs[t][j];
                    double acc = 0.0;
                    for (std::size_t i = 0; i < in; ++i) {
                        const double di = d_in[t][i];
                        wgr[i] += outv * di;
                        acc += wr[i] * di;
                    }
                    d_prev[t][j] = acc;
                }
            }
            d_out = std::move(d_prev);
        }
    }
}

void LstmNetwork::zero_grad() {
    for (Layer& layer : layer_grads_) {
        for (LstmCellParams& p : layer.cells) {
            p.w_i.fill(0.0);
            p.w_f.fill(0.0);
            p.w_c.fill(0.0);
            p.w_o.fill(0.0);
            p.b_i.fill(0.0);
            p.b_f.fill(0.0);
            p.b_c.fill(0.0);
            p.b_o.fill(0.0);
        }
    }
    for (Matrix& m : transfer_grads_) m.fill(0.0);
    head_weights_grad_.fill(0.0);
    head_bias_grad_.fill(0.0);
}

std::vector<ParamRef> LstmNetwork::params() {
    std::vector<ParamRef> out;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        for (std::size_t d = 0; d < directions_; ++d) {
            const std::string base =
                "lstm.l" + std::to_string(l) + (d == 0 ? ".fwd." : ".bwd.");
            LstmCellParams& p = layers_[l].cells[d];
            LstmCellParams& g = layer_grads_[l].cells[d];
            out.push_back({base + "w_i", &p.w_i, &g.w_i});
            out.push_back({base + "w_f", &p.w_f, &g.w_f});
            out.push_back({base + "w_c", &p.w_c, &g.w_c});
            out.push_back({base + "w_o", &p.w_o, &g.w_o});
            out.push_back({base + "b_i", &p.b_i, &g.b_i});
            out.push_back({base + "b_f", &p.b_f, &g.b_f});
            out.push_back({base + "b_c", &p.b_c, &g.b_c});
            out.push_back({base + "b_o", &p.b_o, &g.b_o});
        }
    }
    for (std::size_t l = 0; l < transfers_.size(); ++l) {
        out.push_back({"lstm.transfer" + std::to_string(l), &transfers_[l],
                       &transfer_grads_[l]});
    }
    out.push_back({"head.weight", &head_weights_, &head_weights_grad_});
    out.push_back({"head.bias", &head_bias_, &head_bias_grad_});
    return out;
}

}  // namespace flowcast
