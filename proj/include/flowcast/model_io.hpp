#pragma once

#include <memory>
#include <string>

#include "flowcast/dataset.hpp"
#include "flowcast/ensemble.hpp"
#include "flowcast/experiment.hpp"
#include "flowcast/linear_model.hpp"

namespace flowcast {

/// A fitted model plus everything needed to run it on raw records: the
/// lookback, the feature width, and the normalization statistics it was
/// trained under. Exactly one engine member is populated, per kind.
struct TrainedModel {
    ModelKind kind = ModelKind::lr;
    std::size_t lookback = 7;
    std::size_t features = 0;
    NormStats stats;

    LinearModel linear;
    Ensemble ensemble;
    std::shared_ptr<CnnModel> cnn;
    std::shared_ptr<LstmNetwork> lstm;

    /// Prediction in normalized units for one normalized window.
    double predict_normalized(const Matrix& window) const;
};

/// Text format, versioned first line. Network tensors are written flat by
/// parameter name; trees as preorder node lists.
void save_model(const std::string& path, const TrainedModel& model);
TrainedModel load_model(const std::string& path);

}  // namespace flowcast
