#pragma once

#include <cstddef>
#include <vector>

#include "flowcast/matrix.hpp"
#include "flowcast/model.hpp"

namespace flowcast {

struct AdaDeltaConfig {
    double rho = 0.95;
    double epsilon = 1e-6;
    double lr_scale = 1.0;
};

/// One in-place update of a single tensor:
///   Eg  <- rho*Eg + (1-rho)*g^2
///   dx   = -sqrt(Ex + eps)/sqrt(Eg + eps) * g * lr_scale
///   Ex  <- rho*Ex + (1-rho)*dx^2
///   p   += dx
/// Accumulators must match the tensor's shape.
void adadelta_update(Matrix& param, const Matrix& grad, Matrix& acc_grad_sq,
                     Matrix& acc_update_sq, const AdaDeltaConfig& cfg);

/// Per-tensor accumulator state for a whole model. Accumulators are sized on
/// the first step and must see the same tensor list on every later step.
class AdaDelta {
public:
    explicit AdaDelta(AdaDeltaConfig cfg = {});

    void step(const std::vector<ParamRef>& params);

    const AdaDeltaConfig& config() const { return cfg_; }

private:
    AdaDeltaConfig cfg_;
    std::vector<Matrix> acc_grad_sq_;
    std::vector<Matrix> acc_update_sq_;
    bool initialized_ = false;
};

}  // namespace flowcast
