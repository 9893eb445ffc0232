#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "flowcast/conv_net.hpp"
#include "flowcast/dataset.hpp"
#include "flowcast/lstm.hpp"
#include "flowcast/splits.hpp"
#include "flowcast/trainer.hpp"

namespace flowcast {

enum class ModelKind { lr, gbr, rf, cnn, lstm };

/// Report row order: classical models first, then the two networks.
inline constexpr ModelKind kReportOrder[] = {ModelKind::lr, ModelKind::gbr, ModelKind::rf,
                                             ModelKind::cnn, ModelKind::lstm};

std::string kind_name(ModelKind kind);         // cli spelling: "lr", "gbr", ...
std::string kind_display_name(ModelKind kind); // report spelling: "LR", "GBR", ...
ModelKind parse_kind(const std::string& name);

struct ExperimentConfig {
    std::size_t lookback = 7;
    std::size_t repeats = 10;
    std::uint64_t seed = 0;
    bool chronological = false;  // time-ordered split instead of random
    TrainConfig train{};
    CnnConfig cnn{};
    LstmConfig lstm{};
};

/// Normalized train/val/test samples for one split. Statistics are fitted on
/// the rows the training windows touch, never on test-only rows.
struct PreparedSplit {
    std::vector<Sample> train;
    std::vector<Sample> val;
    std::vector<Sample> test;
    NormStats stats;
};

PreparedSplit prepare_split(const std::vector<DailyRecord>& records, std::size_t lookback,
                            const SplitIndices& split);

/// Fit one model on the split and return its test relative error (fraction).
/// Deep models train with validation-based epoch selection; classical models
/// fit on the training set alone. All randomness comes from cell_seed.
/// ridge_flag is set when the linear fit needed the ridge fallback.
double evaluate_model(ModelKind kind, const std::vector<DailyRecord>& records,
                      std::size_t lookback, const SplitIndices& split,
                      const ExperimentConfig& config, std::uint64_t cell_seed,
                      bool* ridge_flag = nullptr);

struct EvalReport {
    std::vector<std::vector<double>> per_repeat;  // [model][repeat], percent
    std::vector<double> mean;                     // percent
    std::vector<double> stddev;                   // percent, population
    std::uint64_t seed = 0;
    std::size_t lookback = 0;
    std::size_t repeats = 0;
    std::string dataset_id;
    std::uint64_t config_hash = 0;
    bool ridge_flagged = false;
};

/// All five models over the same repeated splits (paired comparison).
EvalReport compare_all(const std::vector<DailyRecord>& records, const ExperimentConfig& config,
                       const std::string& dataset_id);

/// Fixed-shape text table: Model | Mean Relative Error (%) | Standard Deviation.
std::string render_table(const EvalReport& report);

/// Full-precision key=value lines; mean/std are recomputable from the stored
/// per-repeat values.
std::string render_kv(const EvalReport& report);

/// Re-window and evaluate one model kind per grid value, same master seed
/// throughout; returns (L, mean relative error %) in grid order.
std::vector<std::pair<std::size_t, double>> lookback_sweep(
    const std::vector<DailyRecord>& records, const std::vector<std::size_t>& grid,
    ModelKind kind, const ExperimentConfig& config);

std::uint64_t config_fingerprint(const ExperimentConfig& config);

}  // namespace flowcast
