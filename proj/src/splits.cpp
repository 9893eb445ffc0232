#include "flowcast/splits.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "flowcast/errors.hpp"

namespace flowcast {

namespace {

SplitIndices partition(std::vector<std::size_t> order, std::size_t n) {
    const std::size_t n_train = 7 * n / 10;
    const std::size_t n_val = n / 10;
    SplitIndices s;
    s.train.assign(order.begin(), order.begin() + n_train);
    s.val.assign(order.begin() + n_train, order.begin() + n_train + n_val);
    s.test.assign(order.begin() + n_train + n_val, order.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.val.begin(), s.val.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

}  // namespace

SplitIndices split_712(std::size_t n, SeededRng& rng) {
    if (n < 10) {
        throw ArgumentError("split needs at least 10 samples, have " + std::to_string(n));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    return partition(std::move(order), n);
}

SplitIndices split_chronological(std::size_t n) {
    if (n < 10) {
        throw ArgumentError("split needs at least 10 samples, have " + std::to_string(n));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return partition(std::move(order), n);
}

std::vector<SplitIndices> repeated_splits(std::size_t n, std::size_t k,
                                          std::uint64_t master_seed) {
    if (k == 0) throw ArgumentError("repeat count must be at least 1");
    SeededRng master(master_seed);
    std::vector<SplitIndices> out;
    out.reserve(k);
    for (std::size_t r = 0; r < k; ++r) {
        SeededRng sub = master.derive(r);
        out.push_back(split_712(n, sub));
    }
    return out;
}

std::uint64_t split_fingerprint(const SplitIndices& split) {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ull;
        }
    };
    for (const auto* part : {&split.train, &split.val, &split.test}) {
        mix(part->size());
        for (std::size_t idx : *part) mix(idx);
    }
    return h;
}

}  // namespace flowcast
