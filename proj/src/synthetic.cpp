#include "flowcast/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "flowcast/errors.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

namespace {

constexpr double kLagWeights[6] = {0.85, 0.6, 0.4, 0.25, 0.15, 0.08};
constexpr std::size_t kLead = 6;  // hidden warm-up days so every flow has full lag context

}  // namespace

std::vector<DailyRecord> synth_generate(std::size_t n_days, std::size_t features,
                                        std::uint64_t seed, double noise_scale) {
    if (n_days < 30) throw ArgumentError("need at least 30 days");
    if (features == 0) throw ArgumentError("need at least one feature column");
    if (noise_scale < 0.0 || noise_scale > 10.0) {
        throw ArgumentError("noise scale must be in [0, 10]");
    }
    const std::size_t precip_count = (features + 1) / 2;
    const std::size_t temp_count = features - precip_count;
    const std::size_t total = n_days + kLead;

    SeededRng rng(seed);

    // precip[s][t]: intermittent, exponential wet-day amounts
    std::vector<std::vector<double>> precip(precip_count, std::vector<double>(total));
    for (std::size_t s = 0; s < precip_count; ++s) {
        for (std::size_t t = 0; t < total; ++t) {
            const bool wet = rng.next_double() < 0.35;
            precip[s][t] = wet ? rng.exponential(6.0) : 0.0;
        }
    }

    // temp[s][t]: seasonal sinusoid with station phase offsets and jitter
    std::vector<std::vector<double>> temp(temp_count, std::vector<double>(total));
    for (std::size_t s = 0; s < temp_count; ++s) {
        for (std::size_t t = 0; t < total; ++t) {
            const double day = static_cast<double>(t) - static_cast<double>(kLead) +
                               37.0 * static_cast<double>(s);
            temp[s][t] = 15.0 + 10.0 * std::sin(2.0 * std::numbers::pi * day / 365.25) +
                         rng.uniform(-1.5, 1.5);
        }
    }

    auto mean_precip = [&](std::size_t t) {
        double sum = 0.0;
        for (std::size_t s = 0; s < precip_count; ++s) sum += precip[s][t];
        return sum / static_cast<double>(precip_count);
    };
    auto mean_temp = [&](std::size_t t) {
        double sum = 0.0;
        for (std::size_t s = 0; s < temp_count; ++s) sum += temp[s][t];
        return sum / static_cast<double>(temp_count);
    };

    const Date start{std::chrono::year{1983}, std::chrono::month{1}, std::chrono::day{1}};
    const auto start_days = std::chrono::sys_days(start);

    std::vector<DailyRecord> records;
    records.reserve(n_days);
    for (std::size_t d = 0; d < n_days; ++d) {
        const std::size_t t = d + kLead;
        DailyRecord rec;
        rec.date = Date{start_days + std::chrono::days(static_cast<long>(d))};
        rec.features.reserve(features);
        for (std::size_t s = 0; s < precip_count; ++s) rec.features.push_back(precip[s][t]);
        for (std::size_t s = 0; s < temp_count; ++s) rec.features.push_back(temp[s][t]);

        double flow = 20.0;
        for (std::size_t lag = 1; lag <= 6; ++lag) {
            flow += kLagWeights[lag - 1] * mean_precip(t - lag);
        }
        if (temp_count > 0) flow -= 0.15 * (mean_temp(t - 1) - 15.0);
        flow += rng.uniform(-0.4, 0.4) * noise_scale;
        rec.flow = flow;
        records.push_back(std::move(rec));
    }
    return records;
}

Schema synth_schema(std::size_t features) {
    if (features == 0) throw ArgumentError("need at least one feature column");
    const std::size_t precip_count = (features + 1) / 2;
    Schema schema;
    schema.date_column = "date";
    for (std::size_t s = 0; s < precip_count; ++s) {
        schema.feature_columns.push_back("precip_" + std::to_string(s + 1));
    }
    for (std::size_t s = 0; s < features - precip_count; ++s) {
        schema.feature_columns.push_back("temp_" + std::to_string(s + 1));
    }
    schema.target_column = "flow";
    return schema;
}

}  // namespace flowcast
