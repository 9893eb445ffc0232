#include "flowcast/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include "flowcast/ensemble.hpp"
#include "flowcast/errors.hpp"
#include "flowcast/linear_model.hpp"
#include "flowcast/metrics.hpp"

namespace flowcast {

namespace {

std::size_t kind_index(ModelKind kind) { return static_cast<std::size_t>(kind); }

constexpr std::size_t kKindCount = 5;

// Flatten a sample list for the classical models.
void flatten_set(const std::vector<Sample>& samples, Matrix& x, std::vector<double>& y) {
    const std::size_t n = samples.size();
    const std::size_t w = samples.front().x.size();
    x = Matrix(n, w);
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double> flat = flatten_window(samples[i].x);
        for (std::size_t j = 0; j < w; ++j) x(i, j) = flat[j];
        y[i] = samples[i].y;
    }
}

double score_test(const std::vector<double>& pred_norm, const std::vector<Sample>& test,
                  const NormStats& stats) {
    std::vector<double> real_norm;
    real_norm.reserve(test.size());
    for (const Sample& s : test) real_norm.push_back(s.y);
    return relative_error(denormalize_target(pred_norm, stats),
                          denormalize_target(real_norm, stats));
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::lr: return "lr";
        case ModelKind::gbr: return "gbr";
        case ModelKind::rf: return "rf";
        case ModelKind::cnn: return "cnn";
        case ModelKind::lstm: return "lstm";
    }
    throw ArgumentError("unknown model kind");
}

std::string kind_display_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::lr: return "LR";
        case ModelKind::gbr: return "GBR";
        case ModelKind::rf: return "RF";
        case ModelKind::cnn: return "CNN";
        case ModelKind::lstm: return "LSTM";
    }
    throw ArgumentError("unknown model kind");
}

ModelKind parse_kind(const std::string& name) {
    for (ModelKind kind : kReportOrder) {
        if (name == kind_name(kind)) return kind;
    }
    throw ArgumentError("unknown model '" + name + "', expected cnn, lstm, lr, gbr or rf");
}

PreparedSplit prepare_split(const std::vector<DailyRecord>& records, std::size_t lookback,
                            const SplitIndices& split) {
    const TrainRows rows = train_rows_for_windows(split.train, lookback, records.size());
    PreparedSplit prepared;
    prepared.stats = normalize_fit(records, rows);
    const std::vector<DailyRecord> normalized = normalize_apply(records, prepared.stats);
    const WindowedDataset windows = make_windows(normalized, lookback);

    auto gather = [&](const std::vector<std::size_t>& idx) {
        std::vector<Sample> out;
        out.reserve(idx.size());
        for (std::size_t i : idx) {
            if (i >= windows.samples.size()) {
                throw ArgumentError("split index " + std::to_string(i) + " out of range for " +
                                    std::to_string(windows.samples.size()) + " windows");
            }
            out.push_back(windows.samples[i]);
        }
        return out;
    };
    prepared.train = gather(split.train);
    prepared.val = gather(split.val);
    prepared.test = gather(split.test);
    return prepared;
}

double evaluate_model(ModelKind kind, const std::vector<DailyRecord>& records,
                      std::size_t lookback, const SplitIndices& split,
                      const ExperimentConfig& config, std::uint64_t cell_seed,
                      bool* ridge_flag) {
    const PreparedSplit prepared = prepare_split(records, lookback, split);
    SeededRng cell(cell_seed);

    if (kind == ModelKind::cnn || kind == ModelKind::lstm) {
        std::unique_ptr<Model> model;
        SeededRng init_rng = cell.derive(0);
        const std::size_t features = records.front().features.size();
        if (kind == ModelKind::cnn) {
            model = std::make_unique<CnnModel>(features, config.cnn, init_rng);
        } else {
            model = std::make_unique<LstmNetwork>(features, config.lstm, init_rng);
        }
        TrainConfig train_cfg = config.train;
        train_cfg.seed = cell.derive(1).seed();
        fit(*model, prepared.train, prepared.val, prepared.stats, train_cfg);
        return rel_err_on(*model, prepared.test, prepared.stats);
    }

    Matrix train_x;
    std::vector<double> train_y;
    flatten_set(prepared.train, train_x, train_y);
    std::vector<double> pred;
    pred.reserve(prepared.test.size());

    if (kind == ModelKind::lr) {
        const LinearModel model = ols_fit(train_x, train_y);
        if (ridge_flag != nullptr && model.ridge_fallback) *ridge_flag = true;
        for (const Sample& s : prepared.test) pred.push_back(model.predict(flatten_window(s.x)));
    } else if (kind == ModelKind::gbr) {
        const Ensemble model = gbr_fit(train_x, train_y);
        for (const Sample& s : prepared.test) pred.push_back(model.predict(flatten_window(s.x)));
    } else {
        const Ensemble model = rf_fit(train_x, train_y, 100, 0, true, cell.derive(0).seed());
        for (const Sample& s : prepared.test) pred.push_back(model.predict(flatten_window(s.x)));
    }
    return score_test(pred, prepared.test, prepared.stats);
}

EvalReport compare_all(const std::vector<DailyRecord>& records, const ExperimentConfig& config,
                       const std::string& dataset_id) {
    if (records.size() <= config.lookback) {
        throw ArgumentError("dataset of " + std::to_string(records.size()) +
                            " records cannot window at lookback " +
                            std::to_string(config.lookback));
    }
    const std::size_t n_windows = records.size() - config.lookback;
    std::vector<SplitIndices> splits;
    if (config.chronological) {
        splits.assign(config.repeats, split_chronological(n_windows));
    } else {
        splits = repeated_splits(n_windows, config.repeats, config.seed);
    }

    EvalReport report;
    report.seed = config.seed;
    report.lookback = config.lookback;
    report.repeats = config.repeats;
    report.dataset_id = dataset_id;
    report.config_hash = config_fingerprint(config);
    report.per_repeat.assign(kKindCount, {});

    SeededRng master(config.seed);
    for (std::size_t r = 0; r < config.repeats; ++r) {
        for (ModelKind kind : kReportOrder) {
            const std::uint64_t cell_seed =
                master.derive(1000 + r * 8 + kind_index(kind)).seed();
            double err = 0.0;
            try {
                err = evaluate_model(kind, records, config.lookback, splits[r], config,
                                     cell_seed, &report.ridge_flagged);
            } catch (const TrainingDivergence& e) {
                throw TrainingDivergence("model " + kind_display_name(kind) + ", repeat " +
                                         std::to_string(r) + ": " + e.what());
            } catch (const DataError& e) {
                throw DataError("model " + kind_display_name(kind) + ", repeat " +
                                std::to_string(r) + ": " + e.what());
            } catch (const std::invalid_argument& e) {
                throw ArgumentError("model " + kind_display_name(kind) + ", repeat " +
                                    std::to_string(r) + ": " + e.what());
            }
            report.per_repeat[kind_index(kind)].push_back(100.0 * err);
        }
    }

    for (std::size_t m = 0; m < kKindCount; ++m) {
        const std::vector<double>& vals = report.per_repeat[m];
        double sum = 0.0;
        for (double v : vals) sum += v;
        const double mean = sum / static_cast<double>(vals.size());
        double sq = 0.0;
        for (double v : vals) sq += (v - mean) * (v - mean);
        report.mean.push_back(mean);
        report.stddev.push_back(std::sqrt(sq / static_cast<double>(vals.size())));
    }
    return report;
}

std::string render_table(const EvalReport& report) {
    std::ostringstream out;
    out << "Model | Mean Relative Error (%) | Standard Deviation\n";
    for (ModelKind kind : kReportOrder) {
        const std::size_t m = kind_index(kind);
        out << kind_display_name(kind) << " | " << format_percent(report.mean[m]) << " | "
            << format_percent(report.stddev[m]) << "\n";
    }
    out << "# lookback " << report.lookback << ", repeats " << report.repeats << ", seed "
        << report.seed << ", dataset " << report.dataset_id << "\n";
    if (report.ridge_flagged) {
        out << "# note: linear fit used ridge fallback (singular normal equations)\n";
    }
    return out.str();
}

std::string render_kv(const EvalReport& report) {
    std::ostringstream out;
    out << "lookback=" << report.lookback << "\n";
    out << "repeats=" << report.repeats << "\n";
    out << "seed=" << report.seed << "\n";
    out << "dataset=" << report.dataset_id << "\n";
    out << "config_hash=" << report.config_hash << "\n";
    out << "ridge_fallback=" << (report.ridge_flagged ? 1 : 0) << "\n";
    for (ModelKind kind : kReportOrder) {
        const std::size_t m = kind_index(kind);
        const std::string name = kind_name(kind);
        out << name << ".mean=" << format_full(report.mean[m]) << "\n";
        out << name << ".std=" << format_full(report.stddev[m]) << "\n";
        for (std::size_t r = 0; r < report.per_repeat[m].size(); ++r) {
            out << name << ".repeat" << r << "=" << format_full(report.per_repeat[m][r])
                << "\n";
        }
    }
    return out.str();
}

std::vector<std::pair<std::size_t, double>> lookback_sweep(
    const std::vector<DailyRecord>& records, const std::vector<std::size_t>& grid,
    ModelKind kind, const ExperimentConfig& config) {
    if (grid.empty()) throw ArgumentError("sweep grid is empty");
    for (std::size_t lookback : grid) {
        if (lookback == 0) throw ArgumentError("sweep grid holds lookback 0");
        if (records.size() < lookback + 10) {
            throw ArgumentError("lookback " + std::to_string(lookback) + " too large for " +
                                std::to_string(records.size()) + " records");
        }
    }

    SeededRng master(config.seed);
    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(grid.size());
    for (std::size_t lookback : grid) {
        const std::size_t n_windows = records.size() - lookback;
        std::vector<SplitIndices> splits;
        if (config.chronological) {
            splits.assign(config.repeats, split_chronological(n_windows));
        } else {
            splits = repeated_splits(n_windows, config.repeats, config.seed);
        }
        double sum = 0.0;
        for (std::size_t r = 0; r < config.repeats; ++r) {
            const std::uint64_t cell_seed =
                master.derive(1000 + r * 8 + kind_index(kind)).seed();
            sum += evaluate_model(kind, records, lookback, splits[r], config, cell_seed);
        }
        out.emplace_back(lookback, 100.0 * sum / static_cast<double>(config.repeats));
    }
    return out;
}

std::uint64_t config_fingerprint(const ExperimentConfig& config) {
    std::ostringstream text;
    text << "L=" << config.lookback << ";k=" << config.repeats << ";seed=" << config.seed
         << ";chrono=" << config.chronological;
    text << ";train=" << config.train.batch_size << "," << config.train.max_epochs << ","
         << config.train.patience << "," << config.train.optimizer.rho << ","
         << config.train.optimizer.epsilon << "," << config.train.optimizer.lr_scale;
    text << ";cnn=";
    for (std::size_t h : config.cnn.kernel_heights) text << h << "+";
    text << config.cnn.channels_per_height << "," << config.cnn.conv_stride << ","
         << config.cnn.pool_height << "," << config.cnn.pool_stride;
    text << ";lstm=" << config.lstm.hidden_per_direction << ","
         << config.lstm.bidirectional;
    for (std::size_t h : config.lstm.extra_layers) text << "+" << h;
    return fnv1a(text.str());
}

}  // namespace flowcast
