#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/experiment.hpp"
#include "flowcast/synthetic.hpp"
#include "support/oracles.hpp"

using flowcast::ExperimentConfig;
using flowcast::ModelKind;
using flowcast::SplitIndices;

namespace {

// Small everything: the experiment plumbing is under test, not the models.
ExperimentConfig tiny_config(std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.lookback = 7;
    cfg.repeats = 2;
    cfg.seed = seed;
    cfg.train.batch_size = 64;
    cfg.train.max_epochs = 2;
    cfg.cnn.kernel_heights = {2, 3};
    cfg.cnn.channels_per_height = 2;
    cfg.lstm.hidden_per_direction = 3;
    return cfg;
}

}  // namespace

TEST_CASE("model names parse both ways") {
    CHECK(flowcast::parse_kind("cnn") == ModelKind::cnn);
    CHECK(flowcast::parse_kind("lstm") == ModelKind::lstm);
    CHECK(flowcast::parse_kind("lr") == ModelKind::lr);
    CHECK(flowcast::kind_name(ModelKind::gbr) == "gbr");
    CHECK(flowcast::kind_display_name(ModelKind::rf) == "RF");
    CHECK_THROWS_AS(flowcast::parse_kind("svm"), flowcast::ArgumentError);
}

TEST_CASE("prepared splits are sized by the index sets and leak nothing") {
    auto records = flowcast::synth_generate(120, 3, 4);
    const std::size_t lookback = 5;

    SplitIndices split;
    for (std::size_t i = 0; i < 40; ++i) split.train.push_back(i);
    for (std::size_t i = 40; i < 50; ++i) split.val.push_back(i);
    for (std::size_t i = 50; i < 115; ++i) split.test.push_back(i);

    flowcast::PreparedSplit a = flowcast::prepare_split(records, lookback, split);
    CHECK(a.train.size() == 40);
    CHECK(a.val.size() == 10);
    CHECK(a.test.size() == 65);
    CHECK(a.train[0].x.rows() == lookback);
    CHECK(a.train[0].x.cols() == 3);

    // Train windows touch records [0, 44] and targets [5, 44]; record 100 is
    // test-only, so corrupting it must not move the statistics.
    auto corrupted = records;
    corrupted[100].features[0] += 1e5;
    corrupted[100].flow += 1e5;
    flowcast::PreparedSplit b = flowcast::prepare_split(corrupted, lookback, split);
    CHECK(a.stats.feature_mean == b.stats.feature_mean);
    CHECK(a.stats.feature_std == b.stats.feature_std);
    CHECK(a.stats.target_mean == b.stats.target_mean);
    CHECK(a.stats.target_std == b.stats.target_std);

    // Normalized training features have mean zero on the rows that fit them.
    double acc = 0.0;
    std::size_t count = 0;
    for (const flowcast::Sample& s : a.train) {
        for (std::size_t r = 0; r < s.x.rows(); ++r) {
            acc += s.x(r, 0);
            ++count;
        }
    }
    // Overlapping windows revisit interior rows, so the mean is near, not at,
    // zero; the raw data is far from zero-mean either way.
    CHECK(std::abs(acc / static_cast<double>(count)) < 0.2);
}

TEST_CASE("evaluate_model is deterministic in the cell seed") {
    auto records = flowcast::synth_generate(200, 3, 8);
    ExperimentConfig cfg = tiny_config(1);
    flowcast::SeededRng split_rng(55);
    SplitIndices split = flowcast::split_712(200 - cfg.lookback, split_rng);

    for (ModelKind kind : {ModelKind::lr, ModelKind::rf, ModelKind::cnn}) {
        const double a =
            flowcast::evaluate_model(kind, records, cfg.lookback, split, cfg, 999);
        const double b =
            flowcast::evaluate_model(kind, records, cfg.lookback, split, cfg, 999);
        CHECK(a == b);
        CHECK(a >= 0.0);
        CHECK(std::isfinite(a));
    }
}

TEST_CASE("compare_all produces a paired five-model report") {
    auto records = flowcast::synth_generate(300, 3, 12, 1.0);
    ExperimentConfig cfg = tiny_config(42);
    flowcast::EvalReport report = flowcast::compare_all(records, cfg, "unit");

    REQUIRE(report.per_repeat.size() == 5);
    REQUIRE(report.mean.size() == 5);
    REQUIRE(report.stddev.size() == 5);
    for (std::size_t m = 0; m < 5; ++m) {
        REQUIRE(report.per_repeat[m].size() == cfg.repeats);
        CHECK(report.mean[m] == doctest::Approx(oracles::mean_of(report.per_repeat[m]))
                                    .epsilon(1e-12));
        CHECK(report.stddev[m] ==
              doctest::Approx(oracles::population_std(report.per_repeat[m])).epsilon(1e-12));
        for (double v : report.per_repeat[m]) {
            CHECK(v >= 0.0);
            CHECK(std::isfinite(v));
        }
    }

    const std::string table = flowcast::render_table(report);
    CHECK(table.find("Model | Mean Relative Error (%) | Standard Deviation\n") == 0);
    std::size_t pos_lr = table.find("\nLR | ");
    std::size_t pos_gbr = table.find("\nGBR | ");
    std::size_t pos_rf = table.find("\nRF | ");
    std::size_t pos_cnn = table.find("\nCNN | ");
    std::size_t pos_lstm = table.find("\nLSTM | ");
    REQUIRE(pos_lr != std::string::npos);
    REQUIRE(pos_gbr != std::string::npos);
    REQUIRE(pos_rf != std::string::npos);
    REQUIRE(pos_cnn != std::string::npos);
    REQUIRE(pos_lstm != std::string::npos);
    CHECK(pos_lr < pos_gbr);
    CHECK(pos_gbr < pos_rf);
    CHECK(pos_rf < pos_cnn);
    CHECK(pos_cnn < pos_lstm);
    CHECK(table.find("dataset unit") != std::string::npos);

    const std::string kv = flowcast::render_kv(report);
    CHECK(kv.find("lr.mean=") != std::string::npos);
    CHECK(kv.find("lstm.repeat1=") != std::string::npos);
    CHECK(kv.find("config_hash=") != std::string::npos);
}

TEST_CASE("rerunning the comparison is bit-exact") {
    auto records = flowcast::synth_generate(260, 3, 13, 1.0);
    ExperimentConfig cfg = tiny_config(7);
    flowcast::EvalReport a = flowcast::compare_all(records, cfg, "rerun");
    flowcast::EvalReport b = flowcast::compare_all(records, cfg, "rerun");
    CHECK(flowcast::render_kv(a) == flowcast::render_kv(b));

    ExperimentConfig other = tiny_config(8);
    flowcast::EvalReport c = flowcast::compare_all(records, other, "rerun");
    CHECK(flowcast::render_kv(a) != flowcast::render_kv(c));
}

TEST_CASE("single-model failures name the model and repeat") {
    // 40 records at lookback 7 leave 23 training windows against 29 linear
    // coefficients: the linear fit must refuse, and compare_all must say who.
    auto records = flowcast::synth_generate(40, 4, 14, 1.0);
    ExperimentConfig cfg = tiny_config(3);
    try {
        flowcast::compare_all(records, cfg, "fail");
        FAIL("expected ArgumentError");
    } catch (const flowcast::ArgumentError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("model LR") != std::string::npos);
        CHECK(msg.find("repeat 0") != std::string::npos);
    }
}

TEST_CASE("lookback sweep returns one mean per grid value in order") {
    auto records = flowcast::synth_generate(240, 3, 15, 1.0);
    ExperimentConfig cfg = tiny_config(5);
    auto sweep = flowcast::lookback_sweep(records, {3, 7, 10}, ModelKind::lr, cfg);
    REQUIRE(sweep.size() == 3);
    CHECK(sweep[0].first == 3);
    CHECK(sweep[1].first == 7);
    CHECK(sweep[2].first == 10);
    for (const auto& [lookback, err] : sweep) {
        CHECK(err >= 0.0);
        CHECK(std::isfinite(err));
    }

    // The signal uses lags 1..6, so a 7-day window must beat a 2-day one.
    auto short_long = flowcast::lookback_sweep(records, {2, 7}, ModelKind::lr, cfg);
    CHECK(short_long[1].second < short_long[0].second);
}

TEST_CASE("sweep grid validation") {
    auto records = flowcast::synth_generate(60, 3, 16, 1.0);
    ExperimentConfig cfg = tiny_config(6);
    CHECK_THROWS_AS(flowcast::lookback_sweep(records, {}, ModelKind::lr, cfg),
                    flowcast::ArgumentError);
    CHECK_THROWS_AS(flowcast::lookback_sweep(records, {0}, ModelKind::lr, cfg),
                    flowcast::ArgumentError);
    CHECK_THROWS_AS(flowcast::lookback_sweep(records, {55}, ModelKind::lr, cfg),
                    flowcast::ArgumentError);
}

TEST_CASE("config fingerprints react to any field") {
    ExperimentConfig base = tiny_config(1);
    const std::uint64_t h0 = flowcast::config_fingerprint(base);

    ExperimentConfig lb = base;
    lb.lookback = 9;
    CHECK(flowcast::config_fingerprint(lb) != h0);

    ExperimentConfig tr = base;
    tr.train.batch_size = 32;
    CHECK(flowcast::config_fingerprint(tr) != h0);

    ExperimentConfig net = base;
    net.lstm.hidden_per_direction = 8;
    CHECK(flowcast::config_fingerprint(net) != h0);
}
