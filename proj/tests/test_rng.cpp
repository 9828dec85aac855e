#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "qme/rng.hpp"

using namespace qme;

TEST_CASE("philox streams are deterministic and independent") {
    Philox a(42, 7), b(42, 7), c(42, 8);
    std::vector<std::uint64_t> xa, xb, xc;
    for (int i = 0; i < 64; ++i) {
        xa.push_back(a.next_u64());
        xb.push_back(b.next_u64());
        xc.push_back(c.next_u64());
    }
    CHECK(xa == xb);
    CHECK(xa != xc);
}

TEST_CASE("uniform values lie in (0, 1]") {
    Philox rng(1, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("gaussian moments are sane") {
    Philox rng(2024, 3);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.gaussian();
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("ensemble seed derivation separates size and sample fields") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t size : {8u, 16u, 27u, 32u, 64u})
        for (std::uint64_t sample = 0; sample < 256; ++sample)
            seen.insert(ensemble_sample_seed(999, size, sample));
    CHECK(seen.size() == 5u * 256u);
}
