#include <doctest.h>

#include <cmath>
#include <set>

#include "kabc/rng.hpp"

using kabc::rng::derive;
using kabc::rng::Xoshiro256ss;

TEST_CASE("identical seeds give identical streams") {
    Xoshiro256ss a(42);
    Xoshiro256ss b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next() == b.next());
    }
}

TEST_CASE("different seeds diverge immediately") {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        firsts.insert(Xoshiro256ss(seed).next());
    }
    CHECK(firsts.size() == 64);
}

TEST_CASE("derive is order sensitive") {
    std::uint64_t root = 0xdeadbeef;
    CHECK(derive(root, 1) != derive(root, 2));
    CHECK(derive(derive(root, 1), 2) != derive(derive(root, 2), 1));
    CHECK(derive(root, 0) != root);
}

TEST_CASE("derived children do not collide at small indices") {
    std::set<std::uint64_t> keys;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        for (std::uint64_t arm = 0; arm < 10; ++arm) {
            keys.insert(derive(derive(7, trial), arm));
        }
    }
    CHECK(keys.size() == 1000);
}

TEST_CASE("uniform01 lies in [0,1) and has the right mean") {
    Xoshiro256ss stream(2024);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = stream.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // sd of the mean is 1/sqrt(12 n) ~ 0.0009; 0.01 is ~11 sigma
    CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("normal draws have standard moments") {
    Xoshiro256ss stream(77);
    const int n = 100000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = stream.normal();
        sum += z;
        sum_sq += z * z;
    }
    double mean = sum / n;
    double variance = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);          // sd of mean ~ 0.0032
    CHECK(std::abs(variance - 1.0) < 0.05);  // sd of var estimate ~ 0.0045
}
