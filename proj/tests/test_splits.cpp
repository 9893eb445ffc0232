#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/rng.hpp"
#include "flowcast/splits.hpp"

using flowcast::SeededRng;
using flowcast::SplitIndices;

namespace {

void check_partition(const SplitIndices& s, std::size_t n) {
    std::set<std::size_t> seen;
    for (const auto* part : {&s.train, &s.val, &s.test}) {
        CHECK(std::is_sorted(part->begin(), part->end()));
        for (std::size_t i : *part) {
            CHECK(i < n);
            CHECK(seen.insert(i).second);  // no index in two sets
        }
    }
    CHECK(seen.size() == n);
}

}  // namespace

TEST_CASE("one hundred samples split 70/10/20") {
    SeededRng rng(1);
    SplitIndices s = flowcast::split_712(100, rng);
    CHECK(s.train.size() == 70);
    CHECK(s.val.size() == 10);
    CHECK(s.test.size() == 20);
    check_partition(s, 100);
}

TEST_CASE("thirty years of days split with floor rounding") {
    SeededRng rng(2);
    SplitIndices s = flowcast::split_712(10958, rng);
    CHECK(s.train.size() == 7670);
    CHECK(s.val.size() == 1095);
    CHECK(s.test.size() == 2193);
    check_partition(s, 10958);
}

TEST_CASE("every size from ten up partitions cleanly") {
    for (std::size_t n : {10u, 11u, 19u, 57u, 100u, 333u}) {
        SeededRng rng(n);
        SplitIndices s = flowcast::split_712(n, rng);
        check_partition(s, n);
        CHECK(s.train.size() == n * 7 / 10);
        CHECK(s.val.size() == n / 10);
        CHECK(s.test.size() == n - n * 7 / 10 - n / 10);
    }
    SeededRng rng(0);
    CHECK_THROWS_AS(flowcast::split_712(9, rng), flowcast::ArgumentError);
}

TEST_CASE("chronological split keeps time order") {
    SplitIndices s = flowcast::split_chronological(100);
    CHECK(s.train.front() == 0);
    CHECK(s.train.back() == 69);
    CHECK(s.val.front() == 70);
    CHECK(s.val.back() == 79);
    CHECK(s.test.front() == 80);
    CHECK(s.test.back() == 99);
    check_partition(s, 100);
}

TEST_CASE("repeated splits are deterministic per seed and differ per repeat") {
    auto a = flowcast::repeated_splits(200, 5, 77);
    auto b = flowcast::repeated_splits(200, 5, 77);
    auto c = flowcast::repeated_splits(200, 5, 78);
    REQUIRE(a.size() == 5);
    for (std::size_t r = 0; r < 5; ++r) {
        check_partition(a[r], 200);
        CHECK(flowcast::split_fingerprint(a[r]) == flowcast::split_fingerprint(b[r]));
    }
    CHECK(flowcast::split_fingerprint(a[0]) != flowcast::split_fingerprint(a[1]));
    CHECK(flowcast::split_fingerprint(a[0]) != flowcast::split_fingerprint(c[0]));
}

TEST_CASE("shuffling actually happens") {
    SeededRng rng(3);
    SplitIndices s = flowcast::split_712(1000, rng);
    // A sorted random 70% draw of 0..999 is not the prefix 0..699.
    bool is_prefix = true;
    for (std::size_t i = 0; i < s.train.size(); ++i) {
        if (s.train[i] != i) {
            is_prefix = false;
            break;
        }
    }
    CHECK_FALSE(is_prefix);
}
