#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "flowcast/dataset.hpp"

namespace flowcast {

/// Seeded synthetic daily series with a learnable signal: intermittent
/// precipitation drives flow through fixed lag weights (lags 1..6), seasonal
/// temperature modulates it, and a bounded uniform term scaled by
/// noise_scale is added to the flow. With noise_scale = 0 the flow is an
/// exact linear function of any window of at least the last 6 days'
/// features. Precipitation is nonnegative and flow stays positive for
/// noise_scale in [0, 10].
std::vector<DailyRecord> synth_generate(std::size_t n_days, std::size_t features,
                                        std::uint64_t seed, double noise_scale = 1.0);

/// Column names matching synth_generate's layout: precipitation stations
/// first, temperature stations after, target "flow".
Schema synth_schema(std::size_t features);

}  // namespace flowcast
