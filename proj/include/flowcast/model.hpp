#pragma once

#include <string>
#include <vector>

#include "flowcast/matrix.hpp"

namespace flowcast {

/// Named view of one parameter tensor and its gradient accumulator.
/// Biases are stored as 1x1 or 1xN matrices so the optimizer sees a uniform
/// list of tensors.
struct ParamRef {
    std::string name;
    Matrix* value;
    Matrix* grad;
};

/// Common surface of the two trainable regression networks. forward() caches
/// the intermediate values backward() needs; predict() is a pure evaluation
/// that leaves the cache alone. One instance belongs to one training thread;
/// parameter values are plain matrices and may be copied across threads.
class Model {
public:
    virtual ~Model() = default;

    /// Run the network on one input window and cache intermediates.
    virtual double forward(const Matrix& x) = 0;

    /// Accumulate d(output)/d(theta) * upstream into the gradient tensors.
    /// Throws UsageError if no forward pass is cached.
    virtual void backward(double upstream) = 0;

    /// Stateless evaluation (does not disturb the training cache).
    virtual double predict(const Matrix& x) const = 0;

    virtual void zero_grad() = 0;
    virtual std::vector<ParamRef> params() = 0;
    virtual std::string kind() const = 0;
};

std::vector<Matrix> snapshot_params(Model& model);
void restore_params(Model& model, const std::vector<Matrix>& snapshot);

}  // namespace flowcast
