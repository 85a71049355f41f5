#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "bootnet/errors.hpp"
#include "bootnet/rng.hpp"

using namespace bootnet;

TEST_CASE("identical seeds replay identical streams") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds and streams diverge") {
    Rng a(1), b(2);
    int same = 0;
    for (int i = 0; i < 64; ++i) same += a.next_u64() == b.next_u64();
    CHECK(same == 0);

    Rng base(7);
    Rng s0 = base.derive(0), s1 = base.derive(1);
    same = 0;
    for (int i = 0; i < 64; ++i) same += s0.next_u64() == s1.next_u64();
    CHECK(same == 0);
}

TEST_CASE("derive is independent of the parent's position") {
    Rng a(9);
    Rng child_before = a.derive(5);
    a.next_u64();
    a.next_u64();
    Rng child_after = a.derive(5);
    for (int i = 0; i < 16; ++i) CHECK(child_before.next_u64() == child_after.next_u64());
}

TEST_CASE("uniform lies in [0,1) and fills the range") {
    Rng r(3);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("bounded uniform respects the interval") {
    Rng r(4);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform(-2.0, 3.0);
        CHECK(u >= -2.0);
        CHECK(u < 3.0);
    }
    CHECK(r.uniform(1.5, 1.5) == 1.5);
}

TEST_CASE("uniform_int covers [0,n) uniformly") {
    Rng r(5);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const std::uint64_t v = r.uniform_int(7);
        REQUIRE(v < 7);
        ++counts[static_cast<std::size_t>(v)];
    }
    for (int c : counts) CHECK(c == doctest::Approx(n / 7.0).epsilon(0.05));
    CHECK(r.uniform_int(1) == 0);
}

TEST_CASE("normal has standard moments") {
    Rng r(6);
    const int n = 50000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("shuffled_indices is a permutation and is seed-stable") {
    Rng r1(11), r2(11);
    const auto a = shuffled_indices(100, r1);
    const auto b = shuffled_indices(100, r2);
    CHECK(a == b);
    std::set<std::size_t> seen(a.begin(), a.end());
    CHECK(seen.size() == 100);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == 99);
    // not the identity with overwhelming probability
    bool moved = false;
    for (std::size_t i = 0; i < a.size(); ++i) moved = moved || a[i] != i;
    CHECK(moved);
}

TEST_CASE("mix_seed separates nearby pairs") {
    CHECK(mix_seed(1, 2) != mix_seed(2, 1));
    CHECK(mix_seed(0, 0) != mix_seed(0, 1));
    CHECK(mix_seed(5, 7) == mix_seed(5, 7));
}
