#include "wpcvi/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

using namespace wpcvi;

TEST_SUITE("rng") {

TEST_CASE("same seed gives the same stream") {
    Rng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs = differs || x != c.next_u64();
    }
    CHECK(differs);
}

TEST_CASE("derived seeds are distinct across streams and seeds") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 20; ++s) {
        for (std::uint64_t k = 0; k < 50; ++k) seen.insert(derive_seed(s, k));
    }
    CHECK(seen.size() == 1000);
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST_CASE("uniform draws stay in [0, 1) with a sensible mean") {
    Rng r(1);
    double sum = 0;
    for (int i = 0; i < 20000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / 20000 - 0.5) < 0.01);
}

TEST_CASE("uniform_index covers the range without bias beyond noise") {
    Rng r(2);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) ++counts[r.uniform_index(7)];
    for (int k : counts) CHECK(std::abs(k - 10000) < 500);
    CHECK_THROWS(r.uniform_index(0));
}

TEST_CASE("normal draws have unit moments") {
    Rng r(3);
    double s = 0, ss = 0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        s += z;
        ss += z * z;
    }
    CHECK(std::abs(s / n) < 0.03);
    CHECK(std::abs(ss / n - 1.0) < 0.03);
}

TEST_CASE("sampling without replacement returns distinct indices") {
    Rng r(4);
    auto idx = r.sample_without_replacement(10, 10);
    std::sort(idx.begin(), idx.end());
    for (std::size_t i = 0; i < 10; ++i) CHECK(idx[i] == i);
    const auto few = r.sample_without_replacement(1000, 5);
    CHECK(std::set<std::size_t>(few.begin(), few.end()).size() == 5);
    CHECK_THROWS(r.sample_without_replacement(3, 4));
}

TEST_CASE("split children are reproducible") {
    Rng a(5), b(5);
    Rng ca = a.split(), cb = b.split();
    for (int i = 0; i < 10; ++i) CHECK(ca.next_u64() == cb.next_u64());
}

}  // TEST_SUITE
