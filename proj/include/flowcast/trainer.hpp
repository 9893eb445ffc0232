#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "flowcast/adadelta.hpp"
#include "flowcast/dataset.hpp"
#include "flowcast/model.hpp"

namespace flowcast {

struct TrainConfig {
    std::size_t batch_size = 90;
    std::size_t max_epochs = 200;
    std::uint64_t seed = 0;
    // Epochs without a new best validation score before stopping.
    std::size_t patience = 20;
    AdaDeltaConfig optimizer{};
};

struct EpochStats {
    std::size_t epoch = 0;  // 1-based
    double train_huber = 0.0;
    double val_rel_err = 0.0;
};

struct FitResult {
    std::vector<EpochStats> history;
    std::size_t best_epoch = 0;
    double best_val_rel_err = 0.0;
};

/// Minibatch training: per epoch, shuffle (seeded), average Huber gradients
/// over each batch (final partial batch included), one AdaDelta step per
/// batch. Validation relative error is scored in original units via stats;
/// the parameters left on the model are those of the best validation epoch.
FitResult fit(Model& model, const std::vector<Sample>& train, const std::vector<Sample>& val,
              const NormStats& stats, const TrainConfig& config);

/// Mean Huber loss of the model's current predictions.
double mean_huber(const Model& model, const std::vector<Sample>& samples);

/// Relative error of the model on samples, denormalized through stats.
double rel_err_on(const Model& model, const std::vector<Sample>& samples,
                  const NormStats& stats);

/// One "epoch, train_huber, val_rel_err" line per epoch.
void write_history(const std::string& path, const std::vector<EpochStats>& history);

}  // namespace flowcast
