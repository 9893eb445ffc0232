#include "flowcast/trainer.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "flowcast/errors.hpp"
#include "flowcast/loss.hpp"
#include "flowcast/metrics.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

double mean_huber(const Model& model, const std::vector<Sample>& samples) {
    if (samples.empty()) throw ArgumentError("mean huber of empty sample set");
    double sum = 0.0;
    for (const Sample& s : samples) sum += huber_term(model.predict(s.x) - s.y);
    return sum / static_cast<double>(samples.size());
}

double rel_err_on(const Model& model, const std::vector<Sample>& samples,
                  const NormStats& stats) {
    if (samples.empty()) throw ArgumentError("relative error of empty sample set");
    std::vector<double> pred;
    std::vector<double> real;
    pred.reserve(samples.size());
    real.reserve(samples.size());
    for (const Sample& s : samples) {
        pred.push_back(model.predict(s.x));
        real.push_back(s.y);
    }
    return relative_error(denormalize_target(pred, stats), denormalize_target(real, stats));
}

FitResult fit(Model& model, const std::vector<Sample>& train, const std::vector<Sample>& val,
              const NormStats& stats, const TrainConfig& config) {
    if (train.empty()) throw ArgumentError("training set is empty");
    if (val.empty()) throw ArgumentError("validation set is empty");
    if (config.batch_size == 0) throw ArgumentError("batch size must be at least 1");
    if (config.batch_size > train.size()) {
        throw ArgumentError("batch size " + std::to_string(config.batch_size) +
                            " exceeds training set of " + std::to_string(train.size()));
    }
    if (config.max_epochs == 0) throw ArgumentError("need at least 1 epoch");

    SeededRng rng(config.seed);
    AdaDelta optimizer(config.optimizer);
    const std::size_t n = train.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    FitResult result;
    result.best_val_rel_err = std::numeric_limits<double>::infinity();
    std::vector<Matrix> best_params = snapshot_params(model);

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < n; start += config.batch_size, ++batch_index) {
            const std::size_t end = std::min(start + config.batch_size, n);
            const double batch_n = static_cast<double>(end - start);
            model.zero_grad();
            for (std::size_t k = start; k < end; ++k) {
                const Sample& s = train[order[k]];
                const double pred = model.forward(s.x);
                const double diff = pred - s.y;
                if (!std::isfinite(diff)) {
                    throw TrainingDivergence("loss not finite at epoch " +
                                             std::to_string(epoch) + ", batch " +
                                             std::to_string(batch_index));
                }
                loss_sum += huber_term(diff);
                model.backward(huber_slope(diff) / batch_n);
            }
            optimizer.step(model.params());
        }

        const double train_huber = loss_sum / static_cast<double>(n);
        const double val_rel = rel_err_on(model, val, stats);
        if (!std::isfinite(train_huber) || !std::isfinite(val_rel)) {
            throw TrainingDivergence("loss not finite at epoch " + std::to_string(epoch) +
                                     " (after batches)");
        }
        result.history.push_back({epoch, train_huber, val_rel});

        if (val_rel < result.best_val_rel_err) {
            result.best_val_rel_err = val_rel;
            result.best_epoch = epoch;
            best_params = snapshot_params(model);
        } else if (epoch - result.best_epoch >= config.patience) {
            break;
        }
    }

    restore_params(model, best_params);
    return result;
}

void write_history(const std::string& path, const std::vector<EpochStats>& history) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write history file '" + path + "'");
    out << "epoch, train_huber, val_rel_err\n";
    char buf[80];
    for (const EpochStats& e : history) {
        std::snprintf(buf, sizeof(buf), "%zu, %.10g, %.10g\n", e.epoch, e.train_huber,
                      e.val_rel_err);
        out << buf;
    }
}

}  // namespace flowcast
