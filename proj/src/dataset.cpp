#include "flowcast/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "flowcast/errors.hpp"

namespace flowcast {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(trim(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

double parse_cell(const std::string& text, std::size_t line_no, const std::string& column) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v)) {
        throw DataError("line " + std::to_string(line_no) + ", column '" + column +
                        "': cannot parse value '" + text + "'");
    }
    return v;
}

std::string number_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Date parse_date(const std::string& text) {
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    char tail = '\0';
    if (std::sscanf(text.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3) {
        throw DataError("malformed date '" + text + "', expected YYYY-MM-DD");
    }
    const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) throw DataError("impossible date '" + text + "'");
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

Schema parse_schema(const std::string& text) {
    Schema schema;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw SchemaError("schema line " + std::to_string(line_no) +
                              ": expected 'role = column', got '" + stripped + "'");
        }
        const std::string role = trim(stripped.substr(0, eq));
        const std::string column = trim(stripped.substr(eq + 1));
        if (column.empty()) {
            throw SchemaError("schema line " + std::to_string(line_no) + ": empty column name");
        }
        if (role == "date") {
            if (!schema.date_column.empty()) throw SchemaError("duplicate 'date' role");
            schema.date_column = column;
        } else if (role == "feature") {
            schema.feature_columns.push_back(column);
        } else if (role == "target") {
            if (!schema.target_column.empty()) throw SchemaError("duplicate 'target' role");
            schema.target_column = column;
        } else {
            throw SchemaError("schema line " + std::to_string(line_no) + ": unknown role '" +
                              role + "'");
        }
    }
    if (schema.date_column.empty()) throw SchemaError("schema declares no date column");
    if (schema.target_column.empty()) throw SchemaError("schema declares no target column");
    if (schema.feature_columns.empty()) throw SchemaError("schema declares no feature columns");
    return schema;
}

Schema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open schema file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_schema(buf.str());
}

void write_schema(const std::string& path, const Schema& schema) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write schema file '" + path + "'");
    out << "date = " << schema.date_column << "\n";
    for (const std::string& f : schema.feature_columns) out << "feature = " << f << "\n";
    out << "target = " << schema.target_column << "\n";
}

LoadResult load_csv(const std::string& path, const Schema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open data file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("data file '" + path + "' is empty");
    const std::vector<std::string> header = split_csv_line(line);

    auto column_index = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw SchemaError("data file '" + path + "' has no column '" + name + "'");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t date_col = column_index(schema.date_column);
    std::vector<std::size_t> feature_cols;
    for (const std::string& f : schema.feature_columns) feature_cols.push_back(column_index(f));
    const std::size_t target_col = column_index(schema.target_column);

    std::vector<DailyRecord> records;
    std::vector<std::string> missing;  // dates (or line labels) of rows with empty cells
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw DataError("line " + std::to_string(line_no) + ": " +
                            std::to_string(cells.size()) + " cells, header has " +
                            std::to_string(header.size()));
        }
        if (cells[date_col].empty()) {
            throw DataError("line " + std::to_string(line_no) + ": empty date cell");
        }
        DailyRecord rec;
        rec.date = parse_date(cells[date_col]);

        bool incomplete = false;
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            if (cells[feature_cols[j]].empty()) {
                incomplete = true;
                break;
            }
        }
        if (cells[target_col].empty()) incomplete = true;
        if (incomplete) {
            missing.push_back(format_date(rec.date));
            continue;
        }
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            rec.features.push_back(
                parse_cell(cells[feature_cols[j]], line_no, schema.feature_columns[j]));
        }
        rec.flow = parse_cell(cells[target_col], line_no, schema.target_column);
        records.push_back(std::move(rec));
    }

    if (!missing.empty()) {
        std::string msg = "missing values on " + std::to_string(missing.size()) + " date(s): ";
        const std::size_t shown = std::min<std::size_t>(missing.size(), 10);
        for (std::size_t i = 0; i < shown; ++i) {
            if (i) msg += ", ";
            msg += missing[i];
        }
        if (missing.size() > shown) msg += ", ...";
        throw DataError(msg);
    }
    if (records.empty()) throw DataError("data file '" + path + "' has no data rows");

    std::sort(records.begin(), records.end(),
              [](const DailyRecord& a, const DailyRecord& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].date == records[i - 1].date) {
            throw DataError("duplicate date " + format_date(records[i].date));
        }
    }

    LoadResult result;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto prev = std::chrono::sys_days(records[i - 1].date);
        const auto cur = std::chrono::sys_days(records[i].date);
        if ((cur - prev).count() > 1) {
            result.gaps.emplace_back(records[i - 1].date, records[i].date);
        }
    }
    result.records = std::move(records);
    return result;
}

void write_csv(const std::string& path, const std::vector<DailyRecord>& records,
               const Schema& schema) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write data file '" + path + "'");
    out << schema.date_column;
    for (const std::string& f : schema.feature_columns) out << ',' << f;
    out << ',' << schema.target_column << "\n";
    for (const DailyRecord& rec : records) {
        if (rec.features.size() != schema.feature_columns.size()) {
            throw ShapeError("record " + format_date(rec.date) + " has " +
                             std::to_string(rec.features.size()) + " features, schema has " +
                             std::to_string(schema.feature_columns.size()));
        }
        out << format_date(rec.date);
        for (double v : rec.features) out << ',' << number_text(v);
        out << ',' << number_text(rec.flow) << "\n";
    }
}

TrainRows train_rows_for_windows(const std::vector<std::size_t>& train_windows,
                                 std::size_t lookback, std::size_t record_count) {
    if (lookback == 0) throw ArgumentError("lookback must be at least 1");
    std::set<std::size_t> features;
    std::set<std::size_t> targets;
    for (std::size_t w : train_windows) {
        if (w + lookback >= record_count) {
            throw ArgumentError("window " + std::to_string(w) + " exceeds " +
                                std::to_string(record_count) + " records at lookback " +
                                std::to_string(lookback));
        }
        for (std::size_t r = w; r < w + lookback; ++r) features.insert(r);
        targets.insert(w + lookback);
    }
    TrainRows rows;
    rows.feature_rows.assign(features.begin(), features.end());
    rows.target_rows.assign(targets.begin(), targets.end());
    return rows;
}

namespace {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

template <typename Getter>
MeanStd column_stats(const std::vector<std::size_t>& rows, Getter get) {
    double sum = 0.0;
    for (std::size_t r : rows) sum += get(r);
    const double mean = sum / static_cast<double>(rows.size());
    double sq = 0.0;
    for (std::size_t r : rows) {
        const double d = get(r) - mean;
        sq += d * d;
    }
    return {mean, std::sqrt(sq / static_cast<double>(rows.size()))};
}

}  // namespace

NormStats normalize_fit(const std::vector<DailyRecord>& records, const TrainRows& rows) {
    if (rows.feature_rows.empty() || rows.target_rows.empty()) {
        throw ArgumentError("normalization needs nonempty training rows");
    }
    for (std::size_t r : rows.feature_rows) {
        if (r >= records.size()) throw ArgumentError("training row out of range");
    }
    for (std::size_t r : rows.target_rows) {
        if (r >= records.size()) throw ArgumentError("training row out of range");
    }
    const std::size_t d = records.front().features.size();
    NormStats stats;
    for (std::size_t j = 0; j < d; ++j) {
        const MeanStd ms =
            column_stats(rows.feature_rows, [&](std::size_t r) { return records[r].features[j]; });
        if (ms.std <= 0.0) {
            throw DataError("feature column " + std::to_string(j) +
                            " is constant on the training rows");
        }
        stats.feature_mean.push_back(ms.mean);
        stats.feature_std.push_back(ms.std);
    }
    const MeanStd ms =
        column_stats(rows.target_rows, [&](std::size_t r) { return records[r].flow; });
    if (ms.std <= 0.0) throw DataError("target column is constant on the training rows");
    stats.target_mean = ms.mean;
    stats.target_std = ms.std;
    return stats;
}

std::vector<DailyRecord> normalize_apply(const std::vector<DailyRecord>& records,
                                         const NormStats& stats) {
    std::vector<DailyRecord> out;
    out.reserve(records.size());
    for (const DailyRecord& rec : records) {
        if (rec.features.size() != stats.feature_mean.size()) {
            throw ShapeError("record has " + std::to_string(rec.features.size()) +
                             " features, stats cover " +
                             std::to_string(stats.feature_mean.size()));
        }
        DailyRecord n = rec;
        for (std::size_t j = 0; j < n.features.size(); ++j) {
            n.features[j] = (n.features[j] - stats.feature_mean[j]) / stats.feature_std[j];
        }
        n.flow = (n.flow - stats.target_mean) / stats.target_std;
        out.push_back(std::move(n));
    }
    return out;
}

std::vector<double> denormalize_target(const std::vector<double>& values,
                                       const NormStats& stats) {
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(v * stats.target_std + stats.target_mean);
    return out;
}

WindowedDataset make_windows(const std::vector<DailyRecord>& records, std::size_t lookback) {
    if (lookback == 0) throw ArgumentError("lookback must be at least 1");
    if (records.size() <= lookback) {
        throw ArgumentError("need more than " + std::to_string(lookback) + " records, have " +
                            std::to_string(records.size()));
    }
    const std::size_t d = records.front().features.size();
    WindowedDataset ds;
    ds.lookback = lookback;
    ds.samples.reserve(records.size() - lookback);
    for (std::size_t i = 0; i + lookback < records.size(); ++i) {
        Sample s;
        s.x = Matrix(lookback, d);
        for (std::size_t r = 0; r < lookback; ++r) {
            const DailyRecord& rec = records[i + r];
            if (rec.features.size() != d) {
                throw ShapeError("record " + format_date(rec.date) + " has " +
                                 std::to_string(rec.features.size()) + " features, expected " +
                                 std::to_string(d));
            }
            for (std::size_t c = 0; c < d; ++c) s.x(r, c) = rec.features[c];
        }
        s.y = records[i + lookback].flow;
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

}  // namespace flowcast
