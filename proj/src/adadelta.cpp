#include "flowcast/adadelta.hpp"

#include <cmath>
#include <string>

#include "flowcast/errors.hpp"

namespace flowcast {

AdaDelta::AdaDelta(AdaDeltaConfig cfg) : cfg_(cfg) {
    if (!(cfg.rho > 0.0 && cfg.rho < 1.0)) {
        throw ArgumentError("AdaDelta: rho must be in (0,1)");
    }
    if (!(cfg.epsilon > 0.0)) throw ArgumentError("AdaDelta: epsilon must be positive");
}

void adadelta_update(Matrix& param, const Matrix& grad, Matrix& acc_grad_sq,
                     Matrix& acc_update_sq, const AdaDeltaConfig& cfg) {
    if (!param.same_shape(grad)) {
        throw ShapeError("adadelta_update: param " + param.shape_str() + " vs grad " +
                         grad.shape_str());
    }
    if (!param.same_shape(acc_grad_sq) || !param.same_shape(acc_update_sq)) {
        throw ShapeError("adadelta_update: accumulator shape does not match param " +
                         param.shape_str());
    }
    const double rho = cfg.rho;
    const double eps = cfg.epsilon;
    double* p = param.data();
    const double* g = grad.data();
    double* eg = acc_grad_sq.data();
    double* ex = acc_update_sq.data();
    for (std::size_t i = 0; i < param.size(); ++i) {
        eg[i] = rho * eg[i] + (1.0 - rho) * g[i] * g[i];
        const double dx = -std::sqrt(ex[i] + eps) / std::sqrt(eg[i] + eps) * g[i] * cfg.lr_scale;
        ex[i] = rho * ex[i] + (1.0 - rho) * dx * dx;
        p[i] += dx;
    }
}

void AdaDelta::step(const std::vector<ParamRef>& params) {
    if (!initialized_) {
        acc_grad_sq_.reserve(params.size());
        acc_update_sq_.reserve(params.size());
        for (const ParamRef& p : params) {
            acc_grad_sq_.emplace_back(p.value->rows(), p.value->cols());
            acc_update_sq_.emplace_back(p.value->rows(), p.value->cols());
        }
        initialized_ = true;
    }
    if (params.size() != acc_grad_sq_.size()) {
        throw ShapeError("AdaDelta::step: tensor count changed from " +
                         std::to_string(acc_grad_sq_.size()) + " to " +
                         std::to_string(params.size()));
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        adadelta_update(*params[i].value, *params[i].grad, acc_grad_sq_[i], acc_update_sq_[i],
                        cfg_);
    }
}

}  // namespace flowcast
