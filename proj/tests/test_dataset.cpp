#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "flowcast/dataset.hpp"
#include "flowcast/errors.hpp"

using flowcast::DailyRecord;
using flowcast::Date;
using flowcast::LoadResult;
using flowcast::NormStats;
using flowcast::Schema;
using flowcast::TrainRows;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content) : path(name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

Schema basic_schema() {
    Schema s;
    s.date_column = "date";
    s.feature_columns = {"rain", "temp"};
    s.target_column = "flow";
    return s;
}

std::vector<DailyRecord> sequential_records(std::size_t n, std::size_t features) {
    std::vector<DailyRecord> out;
    Date start = flowcast::parse_date("2001-01-01");
    auto day = std::chrono::sys_days(start);
    for (std::size_t i = 0; i < n; ++i) {
        DailyRecord rec;
        rec.date = Date(day);
        for (std::size_t j = 0; j < features; ++j) {
            rec.features.push_back(static_cast<double>(i * features + j) * 0.5 + 1.0);
        }
        rec.flow = 10.0 + static_cast<double>(i);
        out.push_back(std::move(rec));
        day += std::chrono::days{1};
    }
    return out;
}

}  // namespace

TEST_CASE("date parsing accepts ISO dates and rejects impossible ones") {
    Date d = flowcast::parse_date("2023-02-28");
    CHECK(flowcast::format_date(d) == "2023-02-28");
    CHECK(flowcast::format_date(flowcast::parse_date("2024-02-29")) == "2024-02-29");
    CHECK_THROWS_AS(flowcast::parse_date("2023-02-30"), flowcast::DataError);
    CHECK_THROWS_AS(flowcast::parse_date("2023-13-01"), flowcast::DataError);
    CHECK_THROWS_AS(flowcast::parse_date("20230101"), flowcast::DataError);
    CHECK_THROWS_AS(flowcast::parse_date("2023-01-01x"), flowcast::DataError);
    CHECK_THROWS_AS(flowcast::parse_date(""), flowcast::DataError);
}

TEST_CASE("schema text parses roles in order") {
    Schema s = flowcast::parse_schema(
        "# comment\n"
        "date = day\n"
        "feature = rain\n"
        "feature = temp\n"
        "target = flow\n");
    CHECK(s.date_column == "day");
    CHECK(s.feature_columns == std::vector<std::string>{"rain", "temp"});
    CHECK(s.target_column == "flow");
}

TEST_CASE("schema errors name the problem") {
    CHECK_THROWS_AS(flowcast::parse_schema("date = d\ntarget = t\n"), flowcast::SchemaError);
    CHECK_THROWS_AS(flowcast::parse_schema("feature = f\ntarget = t\n"), flowcast::SchemaError);
    CHECK_THROWS_AS(flowcast::parse_schema("date = d\nfeature = f\n"), flowcast::SchemaError);
    CHECK_THROWS_AS(
        flowcast::parse_schema("date = a\ndate = b\nfeature = f\ntarget = t\n"),
        flowcast::SchemaError);
    CHECK_THROWS_AS(
        flowcast::parse_schema("date = d\nfeature = f\ntarget = t\nwindow = 3\n"),
        flowcast::SchemaError);
    CHECK_THROWS_AS(flowcast::parse_schema("date d\n"), flowcast::SchemaError);
}

TEST_CASE("schema files round trip") {
    Schema s = basic_schema();
    const std::string path = "schema_roundtrip_tmp.cfg";
    flowcast::write_schema(path, s);
    Schema loaded = flowcast::load_schema(path);
    CHECK(loaded.date_column == s.date_column);
    CHECK(loaded.feature_columns == s.feature_columns);
    CHECK(loaded.target_column == s.target_column);
    std::remove(path.c_str());
}

TEST_CASE("csv loading parses rows and sorts by date") {
    TempFile f("load_basic_tmp.csv",
               "date,rain,temp,flow\n"
               "2020-01-02,1.5,10.0,100.0\n"
               "2020-01-01,0.5,11.0,90.0\n"
               "2020-01-03,2.5,12.0,110.0\n");
    LoadResult r = flowcast::load_csv(f.path, basic_schema());
    REQUIRE(r.records.size() == 3);
    CHECK(flowcast::format_date(r.records[0].date) == "2020-01-01");
    CHECK(r.records[0].features == std::vector<double>{0.5, 11.0});
    CHECK(r.records[0].flow == 90.0);
    CHECK(flowcast::format_date(r.records[2].date) == "2020-01-03");
    CHECK(r.gaps.empty());
}

TEST_CASE("csv loading tolerates extra columns and reordered headers") {
    TempFile f("load_extra_tmp.csv",
               "station,flow,temp,date,rain\n"
               "a,100.0,10.0,2020-01-01,1.5\n"
               "b,200.0,20.0,2020-01-02,2.5\n");
    LoadResult r = flowcast::load_csv(f.path, basic_schema());
    REQUIRE(r.records.size() == 2);
    CHECK(r.records[1].features == std::vector<double>{2.5, 20.0});
    CHECK(r.records[1].flow == 200.0);
}

TEST_CASE("a missing schema column is a schema error naming the column") {
    TempFile f("load_nocol_tmp.csv",
               "date,rain,flow\n"
               "2020-01-01,1.0,10.0\n");
    try {
        flowcast::load_csv(f.path, basic_schema());
        FAIL("expected SchemaError");
    } catch (const flowcast::SchemaError& e) {
        CHECK(std::string(e.what()).find("temp") != std::string::npos);
    }
}

TEST_CASE("an unparseable cell reports line and column") {
    TempFile f("load_badcell_tmp.csv",
               "date,rain,temp,flow\n"
               "2020-01-01,1.0,10.0,50.0\n"
               "2020-01-02,oops,11.0,60.0\n");
    try {
        flowcast::load_csv(f.path, basic_schema());
        FAIL("expected DataError");
    } catch (const flowcast::DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("rain") != std::string::npos);
        CHECK(msg.find("oops") != std::string::npos);
    }
}

TEST_CASE("duplicate dates are rejected") {
    TempFile f("load_dup_tmp.csv",
               "date,rain,temp,flow\n"
               "2020-01-01,1.0,10.0,50.0\n"
               "2020-01-01,2.0,11.0,60.0\n");
    try {
        flowcast::load_csv(f.path, basic_schema());
        FAIL("expected DataError");
    } catch (const flowcast::DataError& e) {
        CHECK(std::string(e.what()).find("2020-01-01") != std::string::npos);
    }
}

TEST_CASE("missing values are an error listing the affected dates") {
    TempFile f("load_missing_tmp.csv",
               "date,rain,temp,flow\n"
               "2020-01-01,1.0,10.0,50.0\n"
               "2020-01-02,,11.0,60.0\n"
               "2020-01-03,3.0,12.0,\n");
    try {
        flowcast::load_csv(f.path, basic_schema());
        FAIL("expected DataError");
    } catch (const flowcast::DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("2020-01-02") != std::string::npos);
        CHECK(msg.find("2020-01-03") != std::string::npos);
        CHECK(msg.find("2 date(s)") != std::string::npos);
    }
}

TEST_CASE("ragged rows are rejected with the line number") {
    TempFile f("load_ragged_tmp.csv",
               "date,rain,temp,flow\n"
               "2020-01-01,1.0,10.0\n");
    try {
        flowcast::load_csv(f.path, basic_schema());
        FAIL("expected DataError");
    } catch (const flowcast::DataError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("calendar gaps are reported as date pairs") {
    TempFile f("load_gap_tmp.csv",
               "date,rain,temp,flow\n"
               "2020-01-01,1.0,10.0,50.0\n"
               "2020-01-02,2.0,11.0,60.0\n"
               "2020-01-05,3.0,12.0,70.0\n");
    LoadResult r = flowcast::load_csv(f.path, basic_schema());
    REQUIRE(r.gaps.size() == 1);
    CHECK(flowcast::format_date(r.gaps[0].first) == "2020-01-02");
    CHECK(flowcast::format_date(r.gaps[0].second) == "2020-01-05");
}

TEST_CASE("csv write then load reproduces values exactly") {
    std::vector<DailyRecord> records = sequential_records(5, 2);
    records[2].features[0] = 1.0 / 3.0;  // not representable in short decimal
    records[3].flow = 0.1 + 0.2;
    Schema s = basic_schema();
    const std::string path = "roundtrip_tmp.csv";
    flowcast::write_csv(path, records, s);
    LoadResult r = flowcast::load_csv(path, s);
    REQUIRE(r.records.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(r.records[i].date == records[i].date);
        CHECK(r.records[i].features == records[i].features);
        CHECK(r.records[i].flow == records[i].flow);
    }
    std::remove(path.c_str());
}

TEST_CASE("z-score statistics use the population standard deviation") {
    std::vector<DailyRecord> records;
    Date start = flowcast::parse_date("2001-01-01");
    auto day = std::chrono::sys_days(start);
    for (double v : {1.0, 2.0, 3.0}) {
        DailyRecord rec;
        rec.date = Date(day);
        rec.features = {v};
        rec.flow = v * 10.0;
        records.push_back(rec);
        day += std::chrono::days{1};
    }
    TrainRows rows;
    rows.feature_rows = {0, 1, 2};
    rows.target_rows = {0, 1, 2};
    NormStats stats = flowcast::normalize_fit(records, rows);
    CHECK(stats.feature_mean[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(stats.feature_std[0] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));

    std::vector<DailyRecord> normed = flowcast::normalize_apply(records, stats);
    CHECK(normed[0].features[0] == doctest::Approx(-1.2247).epsilon(1e-4));
    CHECK(normed[1].features[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(normed[2].features[0] == doctest::Approx(1.2247).epsilon(1e-4));
}

TEST_CASE("normalize then denormalize is the identity within 1e-9") {
    std::vector<DailyRecord> records = sequential_records(20, 3);
    TrainRows rows;
    for (std::size_t i = 0; i < 20; ++i) {
        rows.feature_rows.push_back(i);
        rows.target_rows.push_back(i);
    }
    NormStats stats = flowcast::normalize_fit(records, rows);
    std::vector<DailyRecord> normed = flowcast::normalize_apply(records, stats);

    std::vector<double> flows;
    for (const DailyRecord& r : normed) flows.push_back(r.flow);
    std::vector<double> back = flowcast::denormalize_target(flows, stats);
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(std::abs(back[i] - records[i].flow) < 1e-9);
        for (std::size_t j = 0; j < 3; ++j) {
            const double restored =
                normed[i].features[j] * stats.feature_std[j] + stats.feature_mean[j];
            CHECK(std::abs(restored - records[i].features[j]) < 1e-9);
        }
    }
}

TEST_CASE("statistics ignore rows outside the training set") {
    std::vector<DailyRecord> records = sequential_records(30, 2);
    TrainRows rows;
    for (std::size_t i = 0; i < 20; ++i) {
        rows.feature_rows.push_back(i);
        rows.target_rows.push_back(i);
    }
    NormStats before = flowcast::normalize_fit(records, rows);
    records[25].features[0] += 1e6;  // test-only row
    records[25].flow -= 1e6;
    NormStats after = flowcast::normalize_fit(records, rows);
    CHECK(before.feature_mean == after.feature_mean);
    CHECK(before.feature_std == after.feature_std);
    CHECK(before.target_mean == after.target_mean);
    CHECK(before.target_std == after.target_std);
}

TEST_CASE("a constant training column is rejected by name") {
    std::vector<DailyRecord> records = sequential_records(10, 2);
    for (DailyRecord& r : records) r.features[1] = 3.0;
    TrainRows rows;
    for (std::size_t i = 0; i < 10; ++i) {
        rows.feature_rows.push_back(i);
        rows.target_rows.push_back(i);
    }
    try {
        flowcast::normalize_fit(records, rows);
        FAIL("expected DataError");
    } catch (const flowcast::DataError& e) {
        CHECK(std::string(e.what()).find("1") != std::string::npos);
    }
}

TEST_CASE("train_rows_for_windows unions spans and collects targets") {
    TrainRows rows = flowcast::train_rows_for_windows({0, 2}, 3, 10);
    CHECK(rows.feature_rows == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK(rows.target_rows == std::vector<std::size_t>{3, 5});
    CHECK_THROWS_AS(flowcast::train_rows_for_windows({7}, 3, 10), flowcast::ArgumentError);
}

TEST_CASE("ten records at lookback 7 give exactly three windows") {
    std::vector<DailyRecord> records = sequential_records(10, 2);
    flowcast::WindowedDataset ds = flowcast::make_windows(records, 7);
    REQUIRE(ds.samples.size() == 3);
    CHECK(ds.lookback == 7);

    // sample 0 covers rows [0,7) and predicts row 7's flow
    const flowcast::Sample& s0 = ds.samples[0];
    CHECK(s0.x.rows() == 7);
    CHECK(s0.x.cols() == 2);
    CHECK(s0.x(0, 0) == records[0].features[0]);
    CHECK(s0.x(6, 1) == records[6].features[1]);
    CHECK(s0.y == records[7].flow);
    CHECK(ds.samples[2].y == records[9].flow);
}

TEST_CASE("lookback one uses single-row windows") {
    std::vector<DailyRecord> records = sequential_records(4, 1);
    flowcast::WindowedDataset ds = flowcast::make_windows(records, 1);
    REQUIRE(ds.samples.size() == 3);
    CHECK(ds.samples[0].x.rows() == 1);
    CHECK(ds.samples[0].x(0, 0) == records[0].features[0]);
    CHECK(ds.samples[0].y == records[1].flow);
}

TEST_CASE("window construction rejects degenerate inputs") {
    std::vector<DailyRecord> records = sequential_records(5, 1);
    CHECK_THROWS_AS(flowcast::make_windows(records, 0), flowcast::ArgumentError);
    CHECK_THROWS_AS(flowcast::make_windows(records, 5), flowcast::ArgumentError);
    CHECK_THROWS_AS(flowcast::make_windows(records, 9), flowcast::ArgumentError);
}

TEST_CASE("window count follows records minus lookback") {
    std::vector<DailyRecord> records = sequential_records(40, 1);
    for (std::size_t lb : {1u, 2u, 7u, 15u, 39u}) {
        CHECK(flowcast::make_windows(records, lb).samples.size() == 40 - lb);
    }
}
