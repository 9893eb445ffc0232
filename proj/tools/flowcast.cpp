#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flowcast/dataset.hpp"
#include "flowcast/ensemble.hpp"
#include "flowcast/errors.hpp"
#include "flowcast/experiment.hpp"
#include "flowcast/linear_model.hpp"
#include "flowcast/metrics.hpp"
#include "flowcast/model_io.hpp"
#include "flowcast/splits.hpp"
#include "flowcast/synthetic.hpp"
#include "flowcast/trainer.hpp"

namespace {

using namespace flowcast;

// Sub-stream ids for everything a CLI seed has to cover. The split stream is
// shared by train and evaluate so "train --seed S" and "evaluate --seed S"
// agree on which windows are held out.
constexpr std::uint64_t kStreamModelInit = 0;
constexpr std::uint64_t kStreamShuffle = 1;
constexpr std::uint64_t kStreamSplit = 2;
constexpr std::uint64_t kStreamBootstrap = 3;

SplitIndices make_split(std::size_t n_windows, std::uint64_t seed, bool chronological) {
    if (chronological) return split_chronological(n_windows);
    SeededRng rng = SeededRng(seed).derive(kStreamSplit);
    return split_712(n_windows, rng);
}

std::vector<DailyRecord> load_records(const std::string& data_path,
                                      const std::string& schema_path) {
    const Schema schema = load_schema(schema_path);
    LoadResult loaded = load_csv(data_path, schema);
    for (const auto& [from, to] : loaded.gaps) {
        std::cerr << "warning: gap between " << format_date(from) << " and " << format_date(to)
                  << "\n";
    }
    return std::move(loaded.records);
}

std::vector<std::size_t> parse_grid(const std::string& text) {
    std::vector<std::size_t> grid;
    auto parse_one = [](const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
            throw ArgumentError("bad grid value '" + s + "'");
        }
        return static_cast<std::size_t>(std::stoull(s));
    };
    const std::size_t dots = text.find("..");
    if (dots != std::string::npos) {
        const std::size_t lo = parse_one(text.substr(0, dots));
        const std::size_t hi = parse_one(text.substr(dots + 2));
        if (lo > hi) throw ArgumentError("grid range '" + text + "' is reversed");
        for (std::size_t v = lo; v <= hi; ++v) grid.push_back(v);
        return grid;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        grid.push_back(parse_one(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return grid;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << text;
}

int run_generate(std::size_t days, std::size_t features, std::uint64_t seed,
                 const std::string& out_path) {
    const std::vector<DailyRecord> records = synth_generate(days, features, seed);
    const Schema schema = synth_schema(features);
    write_csv(out_path, records, schema);
    write_schema(out_path + ".schema", schema);
    std::cout << "wrote " << records.size() << " days to " << out_path << " (schema: "
              << out_path << ".schema)\n";
    return 0;
}

int run_train(const std::string& model_name, const std::string& data_path,
              const std::string& schema_path, std::size_t lookback, std::uint64_t seed,
              const std::string& out_path, bool chronological, std::size_t max_epochs,
              std::size_t batch_size) {
    const ModelKind kind = parse_kind(model_name);
    const std::vector<DailyRecord> records = load_records(data_path, schema_path);
    if (records.size() <= lookback) {
        throw ArgumentError("dataset of " + std::to_string(records.size()) +
                            " records cannot window at lookback " + std::to_string(lookback));
    }
    const SplitIndices split = make_split(records.size() - lookback, seed, chronological);
    const PreparedSplit prepared = prepare_split(records, lookback, split);

    TrainedModel trained;
    trained.kind = kind;
    trained.lookback = lookback;
    trained.features = records.front().features.size();
    trained.stats = prepared.stats;

    if (kind == ModelKind::cnn || kind == ModelKind::lstm) {
        SeededRng init_rng = SeededRng(seed).derive(kStreamModelInit);
        std::unique_ptr<Model> net;
        CnnConfig cnn_cfg;
        LstmConfig lstm_cfg;
        if (kind == ModelKind::cnn) {
            net = std::make_unique<CnnModel>(trained.features, cnn_cfg, init_rng);
        } else {
            net = std::make_unique<LstmNetwork>(trained.features, lstm_cfg, init_rng);
        }
        TrainConfig cfg;
        cfg.max_epochs = max_epochs;
        if (batch_size > 0) cfg.batch_size = batch_size;
        cfg.batch_size = std::min(cfg.batch_size, prepared.train.size());
        cfg.seed = SeededRng(seed).derive(kStreamShuffle).seed();
        const FitResult result = fit(*net, prepared.train, prepared.val, prepared.stats, cfg);
        write_history(out_path + ".history", result.history);
        std::cout << "best epoch " << result.best_epoch << ", validation relative error "
                  << result.best_val_rel_err << "\n";
        if (kind == ModelKind::cnn) {
            trained.cnn = std::shared_ptr<CnnModel>(static_cast<CnnModel*>(net.release()));
        } else {
            trained.lstm =
                std::shared_ptr<LstmNetwork>(static_cast<LstmNetwork*>(net.release()));
        }
    } else {
        Matrix x(prepared.train.size(), prepared.train.front().x.size());
        std::vector<double> y(prepared.train.size());
        for (std::size_t i = 0; i < prepared.train.size(); ++i) {
            const std::vector<double> flat = flatten_window(prepared.train[i].x);
            for (std::size_t j = 0; j < flat.size(); ++j) x(i, j) = flat[j];
            y[i] = prepared.train[i].y;
        }
        if (kind == ModelKind::lr) {
            trained.linear = ols_fit(x, y);
            if (trained.linear.ridge_fallback) {
                std::cerr << "warning: singular normal equations, used ridge fallback\n";
            }
        } else if (kind == ModelKind::gbr) {
            trained.ensemble = gbr_fit(x, y);
        } else {
            trained.ensemble =
                rf_fit(x, y, 100, 0, true, SeededRng(seed).derive(kStreamBootstrap).seed());
        }
        std::vector<double> pred;
        std::vector<double> real;
        for (const Sample& s : prepared.train) {
            pred.push_back(trained.predict_normalized(s.x));
            real.push_back(s.y);
        }
        std::cout << "training relative error "
                  << relative_error(denormalize_target(pred, prepared.stats),
                                    denormalize_target(real, prepared.stats))
                  << "\n";
    }

    save_model(out_path, trained);
    std::cout << "wrote model to " << out_path << "\n";
    return 0;
}

int run_evaluate(const std::string& model_path, const std::string& data_path,
                 const std::string& schema_path, std::uint64_t seed, bool chronological) {
    const TrainedModel model = load_model(model_path);
    const std::vector<DailyRecord> records = load_records(data_path, schema_path);
    if (records.size() <= model.lookback) {
        throw ArgumentError("dataset of " + std::to_string(records.size()) +
                            " records cannot window at lookback " +
                            std::to_string(model.lookback));
    }
    const SplitIndices split =
        make_split(records.size() - model.lookback, seed, chronological);
    const std::vector<DailyRecord> normalized = normalize_apply(records, model.stats);
    const WindowedDataset windows = make_windows(normalized, model.lookback);

    std::vector<double> pred;
    std::vector<double> real;
    pred.reserve(split.test.size());
    real.reserve(split.test.size());
    for (std::size_t i : split.test) {
        pred.push_back(model.predict_normalized(windows.samples[i].x));
        real.push_back(windows.samples[i].y);
    }
    const double err = relative_error(denormalize_target(pred, model.stats),
                                      denormalize_target(real, model.stats));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "test relative error %.6f (%.4f%%)\n", err, 100.0 * err);
    std::cout << buf;
    return 0;
}

int run_compare(const std::string& data_path, const std::string& schema_path,
                std::size_t lookback, std::size_t repeats, std::uint64_t seed,
                const std::string& out_path, bool chronological, std::size_t max_epochs,
                std::size_t batch_size) {
    const std::vector<DailyRecord> records = load_records(data_path, schema_path);
    ExperimentConfig config;
    config.lookback = lookback;
    config.repeats = repeats;
    config.seed = seed;
    config.chronological = chronological;
    config.train.max_epochs = max_epochs;
    if (batch_size > 0) config.train.batch_size = batch_size;

    const EvalReport report = compare_all(records, config, data_path);
    const std::string table = render_table(report);
    write_text(out_path, table);
    write_text(out_path + ".kv", render_kv(report));
    std::cout << table;
    std::cout << "wrote " << out_path << " and " << out_path << ".kv\n";
    return 0;
}

int run_sweep(const std::string& data_path, const std::string& schema_path,
              const std::string& grid_text, const std::string& model_name, std::uint64_t seed,
              const std::string& out_path, std::size_t repeats, bool chronological,
              std::size_t max_epochs, std::size_t batch_size) {
    const ModelKind kind = parse_kind(model_name);
    const std::vector<DailyRecord> records = load_records(data_path, schema_path);
    const std::vector<std::size_t> grid = parse_grid(grid_text);

    ExperimentConfig config;
    config.repeats = repeats;
    config.seed = seed;
    config.chronological = chronological;
    config.train.max_epochs = max_epochs;
    if (batch_size > 0) config.train.batch_size = batch_size;

    const auto series = lookback_sweep(records, grid, kind, config);
    std::string csv = "lookback,mean_relative_error_percent\n";
    char buf[64];
    for (const auto& [lookback, err] : series) {
        std::snprintf(buf, sizeof(buf), "%zu,%.6f\n", lookback, err);
        csv += buf;
    }
    write_text(out_path, csv);
    std::cout << csv;
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streamflow forecasting toolkit: window-based daily flow prediction"};
    app.require_subcommand(1);

    std::size_t days = 0;
    std::size_t features = 4;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string data_path;
    std::string schema_path;
    std::string model_name = "lstm";
    std::string model_path;
    std::string grid_text = "1..14";
    std::size_t lookback = 7;
    std::size_t repeats = 10;
    std::size_t max_epochs = 200;
    std::size_t batch_size = 0;  // 0 keeps the default
    bool chronological = false;

    CLI::App* gen = app.add_subcommand("generate", "write a synthetic daily series and schema");
    gen->add_option("--days", days, "number of days")->required();
    gen->add_option("--features", features, "feature columns (precip + temp stations)");
    gen->add_option("--seed", seed, "generator seed")->required();
    gen->add_option("--out", out_path, "output csv path")->required();

    CLI::App* train = app.add_subcommand("train", "fit one model on a seeded split");
    train->add_option("--model", model_name, "cnn, lstm, lr, gbr or rf")->required();
    train->add_option("--data", data_path, "csv path")->required();
    train->add_option("--schema", schema_path, "schema path")->required();
    train->add_option("--lookback", lookback, "window length in days");
    train->add_option("--seed", seed, "split/training seed")->required();
    train->add_option("--out", model_path, "model output path")->required();
    train->add_flag("--chronological", chronological, "time-ordered split instead of random");
    train->add_option("--max-epochs", max_epochs, "epoch cap for cnn/lstm");
    train->add_option("--batch-size", batch_size, "minibatch size for cnn/lstm");

    CLI::App* eval = app.add_subcommand("evaluate", "score a saved model on a seeded test split");
    eval->add_option("--model-file", model_path, "saved model path")->required();
    eval->add_option("--data", data_path, "csv path")->required();
    eval->add_option("--schema", schema_path, "schema path")->required();
    eval->add_option("--seed", seed, "split seed (match the training seed)")->required();
    eval->add_flag("--chronological", chronological, "time-ordered split instead of random");

    CLI::App* compare = app.add_subcommand("compare", "all five models over repeated splits");
    compare->add_option("--data", data_path, "csv path")->required();
    compare->add_option("--schema", schema_path, "schema path")->required();
    compare->add_option("--lookback", lookback, "window length in days");
    compare->add_option("--repeats", repeats, "number of repeated splits");
    compare->add_option("--seed", seed, "master seed")->required();
    compare->add_option("--out", out_path, "report path (key=value twin gets .kv)")->required();
    compare->add_flag("--chronological", chronological, "time-ordered split instead of random");
    compare->add_option("--max-epochs", max_epochs, "epoch cap for cnn/lstm");
    compare->add_option("--batch-size", batch_size, "minibatch size for cnn/lstm");

    CLI::App* sweep = app.add_subcommand("sweep", "mean error per lookback value");
    sweep->add_option("--data", data_path, "csv path")->required();
    sweep->add_option("--schema", schema_path, "schema path")->required();
    sweep->add_option("--grid", grid_text, "lookback grid, e.g. 1..14 or 3,5,7");
    sweep->add_option("--model", model_name, "cnn, lstm, lr, gbr or rf");
    sweep->add_option("--seed", seed, "master seed")->required();
    sweep->add_option("--out", out_path, "csv output path")->required();
    sweep->add_option("--repeats", repeats, "number of repeated splits per grid value");
    sweep->add_flag("--chronological", chronological, "time-ordered split instead of random");
    sweep->add_option("--max-epochs", max_epochs, "epoch cap for cnn/lstm");
    sweep->add_option("--batch-size", batch_size, "minibatch size for cnn/lstm");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 4;
    }

    try {
        if (gen->parsed()) return run_generate(days, features, seed, out_path);
        if (train->parsed()) {
            return run_train(model_name, data_path, schema_path, lookback, seed, model_path,
                             chronological, max_epochs, batch_size);
        }
        if (eval->parsed()) {
            return run_evaluate(model_path, data_path, schema_path, seed, chronological);
        }
        if (compare->parsed()) {
            return run_compare(data_path, schema_path, lookback, repeats, seed, out_path,
                               chronological, max_epochs, batch_size);
        }
        if (sweep->parsed()) {
            return run_sweep(data_path, schema_path, grid_text, model_name, seed, out_path,
                             repeats, chronological, max_epochs, batch_size);
        }
    } catch (const flowcast::TrainingDivergence& e) {
        std::cerr << "error: training diverged: " << e.what() << "\n";
        return 3;
    } catch (const flowcast::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
