#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/model_io.hpp"
#include "flowcast/rng.hpp"
#include "flowcast/synthetic.hpp"

using flowcast::Matrix;
using flowcast::ModelKind;
using flowcast::SeededRng;
using flowcast::TrainedModel;

namespace {

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& p) : path(p) {}
    ~TempPath() { std::remove(path.c_str()); }
};

flowcast::NormStats some_stats(std::size_t features) {
    flowcast::NormStats stats;
    for (std::size_t j = 0; j < features; ++j) {
        stats.feature_mean.push_back(0.25 * static_cast<double>(j) - 1.0);
        stats.feature_std.push_back(1.0 + 0.5 * static_cast<double>(j));
    }
    stats.target_mean = 33.75;
    stats.target_std = 4.125;
    return stats;
}

std::vector<Matrix> random_windows(std::size_t count, std::size_t lookback,
                                   std::size_t features, std::uint64_t seed) {
    SeededRng rng(seed);
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(flowcast::uniform_init(rng, lookback, features, 1.5));
    }
    return out;
}

void check_roundtrip(const TrainedModel& model, const std::string& path) {
    flowcast::save_model(path, model);
    TrainedModel loaded = flowcast::load_model(path);
    CHECK(loaded.kind == model.kind);
    CHECK(loaded.lookback == model.lookback);
    CHECK(loaded.features == model.features);
    CHECK(loaded.stats.target_mean == model.stats.target_mean);
    CHECK(loaded.stats.target_std == model.stats.target_std);
    CHECK(loaded.stats.feature_mean == model.stats.feature_mean);
    CHECK(loaded.stats.feature_std == model.stats.feature_std);

    for (const Matrix& w : random_windows(8, model.lookback, model.features, 99)) {
        CHECK(loaded.predict_normalized(w) == model.predict_normalized(w));
    }
}

}  // namespace

TEST_CASE("linear models round trip bit-exactly") {
    TrainedModel model;
    model.kind = ModelKind::lr;
    model.lookback = 3;
    model.features = 2;
    model.stats = some_stats(2);
    model.linear.weights = {0.1, -0.2, 1.0 / 3.0, 0.4, -0.5, 0.6};
    model.linear.intercept = 0.7;
    model.linear.ridge_fallback = true;

    TempPath p("model_lr_tmp.txt");
    check_roundtrip(model, p.path);
    CHECK(flowcast::load_model(p.path).linear.ridge_fallback);
}

TEST_CASE("boosted ensembles round trip bit-exactly") {
    auto records = flowcast::synth_generate(80, 3, 31, 1.0);
    flowcast::WindowedDataset ds = flowcast::make_windows(records, 4);
    Matrix x(ds.samples.size(), 12);
    std::vector<double> y;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        std::vector<double> flat = flowcast::flatten_window(ds.samples[i].x);
        for (std::size_t j = 0; j < 12; ++j) x(i, j) = flat[j];
        y.push_back(ds.samples[i].y);
    }

    TrainedModel model;
    model.kind = ModelKind::gbr;
    model.lookback = 4;
    model.features = 3;
    model.stats = some_stats(3);
    model.ensemble = flowcast::gbr_fit(x, y, 12, 0.1, 3);

    TempPath p("model_gbr_tmp.txt");
    check_roundtrip(model, p.path);
}

TEST_CASE("forests round trip bit-exactly") {
    auto records = flowcast::synth_generate(60, 3, 32, 1.0);
    flowcast::WindowedDataset ds = flowcast::make_windows(records, 4);
    Matrix x(ds.samples.size(), 12);
    std::vector<double> y;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        std::vector<double> flat = flowcast::flatten_window(ds.samples[i].x);
        for (std::size_t j = 0; j < 12; ++j) x(i, j) = flat[j];
        y.push_back(ds.samples[i].y);
    }

    TrainedModel model;
    model.kind = ModelKind::rf;
    model.lookback = 4;
    model.features = 3;
    model.stats = some_stats(3);
    model.ensemble = flowcast::rf_fit(x, y, 8, 2, true, 5);

    TempPath p("model_rf_tmp.txt");
    check_roundtrip(model, p.path);
}

TEST_CASE("convolutional models round trip bit-exactly") {
    flowcast::CnnConfig cfg;
    cfg.kernel_heights = {2, 3};
    cfg.channels_per_height = 3;
    SeededRng rng(41);

    TrainedModel model;
    model.kind = ModelKind::cnn;
    model.lookback = 5;
    model.features = 3;
    model.stats = some_stats(3);
    model.cnn = std::make_shared<flowcast::CnnModel>(3, cfg, rng);

    TempPath p("model_cnn_tmp.txt");
    check_roundtrip(model, p.path);
}

TEST_CASE("recurrent models round trip bit-exactly") {
    flowcast::LstmConfig cfg;
    cfg.hidden_per_direction = 3;
    cfg.bidirectional = true;
    cfg.extra_layers = {2};
    SeededRng rng(43);

    TrainedModel model;
    model.kind = ModelKind::lstm;
    model.lookback = 6;
    model.features = 2;
    model.stats = some_stats(2);
    model.lstm = std::make_shared<flowcast::LstmNetwork>(2, cfg, rng);

    TempPath p("model_lstm_tmp.txt");
    check_roundtrip(model, p.path);
}

TEST_CASE("wrong magic and truncated payloads are data errors") {
    TempPath bad("model_bad_tmp.txt");
    {
        std::ofstream out(bad.path);
        out << "something-else 3\n";
    }
    CHECK_THROWS_AS(flowcast::load_model(bad.path), flowcast::DataError);

    TrainedModel model;
    model.kind = ModelKind::lr;
    model.lookback = 2;
    model.features = 1;
    model.stats = some_stats(1);
    model.linear.weights = {0.5, 0.25};
    model.linear.intercept = 1.0;
    TempPath good("model_trunc_tmp.txt");
    flowcast::save_model(good.path, model);

    std::ifstream in(good.path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    {
        std::ofstream out(good.path, std::ios::trunc);
        out << text.substr(0, text.size() / 2);
    }
    CHECK_THROWS_AS(flowcast::load_model(good.path), flowcast::DataError);

    CHECK_THROWS_AS(flowcast::load_model("no_such_model_file.txt"), flowcast::DataError);
}
