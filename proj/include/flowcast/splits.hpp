#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "flowcast/rng.hpp"

namespace flowcast {

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

/// Random 7:1:2 partition of {0..n-1}: floor(0.7n) train, floor(0.1n) val,
/// remainder test. Index sets come back sorted.
SplitIndices split_712(std::size_t n, SeededRng& rng);

/// First 70% / next 10% / rest, in time order.
SplitIndices split_chronological(std::size_t n);

/// k independent 7:1:2 splits, each from a seed derived from (master_seed,
/// repeat index). Repeats are resamples, not disjoint folds.
std::vector<SplitIndices> repeated_splits(std::size_t n, std::size_t k,
                                          std::uint64_t master_seed);

/// Order-sensitive hash of the three index sets, for paired-split checks.
std::uint64_t split_fingerprint(const SplitIndices& split);

}  // namespace flowcast
