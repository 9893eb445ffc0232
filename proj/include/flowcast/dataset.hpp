#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "flowcast/matrix.hpp"

namespace flowcast {

using Date = std::chrono::year_month_day;

/// Parse "YYYY-MM-DD"; throws DataError on malformed or impossible dates.
Date parse_date(const std::string& text);
std::string format_date(const Date& date);

/// One day of observations: predictor columns plus the flow target.
struct DailyRecord {
    Date date;
    std::vector<double> features;
    double flow = 0.0;
};

/// Column roles for a CSV file, read from a small config of "role = column"
/// lines. Roles: date, feature (repeatable, order defines feature index),
/// target.
struct Schema {
    std::string date_column;
    std::vector<std::string> feature_columns;
    std::string target_column;
};

Schema parse_schema(const std::string& text);
Schema load_schema(const std::string& path);
void write_schema(const std::string& path, const Schema& schema);

struct LoadResult {
    std::vector<DailyRecord> records;  // sorted by date
    // Adjacent record dates with missing days between them.
    std::vector<std::pair<Date, Date>> gaps;
};

/// Strict CSV ingestion: every schema column must exist, every cell must
/// parse, dates must be unique. Missing values are an error, never imputed.
LoadResult load_csv(const std::string& path, const Schema& schema);

void write_csv(const std::string& path, const std::vector<DailyRecord>& records,
               const Schema& schema);

/// Per-column z-score statistics (population std), fitted on training rows.
struct NormStats {
    std::vector<double> feature_mean;
    std::vector<double> feature_std;
    double target_mean = 0.0;
    double target_std = 1.0;
};

/// Record rows that windowed training samples actually touch: feature rows
/// are the union of the train windows' spans, target rows are the train
/// windows' target days. Keeps every test-only row out of the statistics.
struct TrainRows {
    std::vector<std::size_t> feature_rows;
    std::vector<std::size_t> target_rows;
};

TrainRows train_rows_for_windows(const std::vector<std::size_t>& train_windows,
                                 std::size_t lookback, std::size_t record_count);

NormStats normalize_fit(const std::vector<DailyRecord>& records, const TrainRows& rows);
std::vector<DailyRecord> normalize_apply(const std::vector<DailyRecord>& records,
                                         const NormStats& stats);
std::vector<double> denormalize_target(const std::vector<double>& values,
                                       const NormStats& stats);

/// One supervised case: lookback days of features and the next day's flow.
struct Sample {
    Matrix x;
    double y = 0.0;
};

struct WindowedDataset {
    std::size_t lookback = 0;
    std::vector<Sample> samples;
};

/// Overlapping stride-1 windows; sample i spans records [i, i+L) and its
/// target is record i+L's flow.
WindowedDataset make_windows(const std::vector<DailyRecord>& records, std::size_t lookback);

}  // namespace flowcast
