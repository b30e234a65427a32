#include <doctest.h>

#include <cmath>

#include "usvswarm/rng.hpp"

using namespace usvswarm;

TEST_CASE("same seed gives identical streams") {
    Rng a(12345), b(12345);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform stays in [0,1)") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("uniform_index covers the range without bias blowups") {
    Rng rng(99);
    int counts[10] = {};
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) counts[rng.uniform_index(10)] += 1;
    for (int c : counts) {
        CHECK(c > draws / 10 - 1000);
        CHECK(c < draws / 10 + 1000);
    }
    CHECK_THROWS(rng.uniform_index(0));
}

TEST_CASE("normal has roughly unit moments") {
    Rng rng(3);
    double sum = 0.0, sumsq = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sumsq += x * x;
    }
    CHECK(std::abs(sum / n) < 0.02);
    CHECK(std::abs(sumsq / n - 1.0) < 0.03);
}

TEST_CASE("derive_seed produces distinct decorrelated streams") {
    const uint64_t base = 42;
    CHECK(Rng::derive_seed(base, 0) != Rng::derive_seed(base, 1));
    CHECK(Rng::derive_seed(base, 0) != Rng::derive_seed(base + 1, 0));
    Rng a(Rng::derive_seed(base, 0)), b(Rng::derive_seed(base, 1));
    CHECK(a.next_u64() != b.next_u64());
}
