#include <doctest.h>

#include <algorithm>
#include <vector>

#include "spinmarket/error.hpp"
#include "spinmarket/lattice.hpp"

using namespace spinmarket;

namespace {

bool contains(const std::array<Site, 4>& sites, Site s) {
    return std::find(sites.begin(), sites.end(), s) != sites.end();
}

}  // namespace

TEST_CASE("init modes fix the magnetization") {
    const SpinLattice up(2, InitMode::AllUp, 123);
    CHECK(up.magnetization() == 1.0);
    CHECK(up.up_count() == 4);

    const SpinLattice down(2, InitMode::AllDown, 123);
    CHECK(down.magnetization() == -1.0);
    CHECK(down.up_count() == 0);
}

TEST_CASE("random init is reproducible per seed") {
    const SpinLattice a(32, InitMode::Random, 7);
    const SpinLattice b(32, InitMode::Random, 7);
    const SpinLattice c(32, InitMode::Random, 8);
    CHECK(std::equal(a.spins().begin(), a.spins().end(), b.spins().begin()));
    CHECK_FALSE(a == c);
    // Roughly half up for a fair coin (1024 spins, 5 sigma = 80).
    CHECK(a.up_count() > 432);
    CHECK(a.up_count() < 592);
}

TEST_CASE("side below 2 is rejected") {
    for (int bad : {1, 0, -3}) {
        try {
            SpinLattice lattice(bad, InitMode::AllUp, 1);
            FAIL("expected invalid-dimension error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidDimension);
        }
    }
}

TEST_CASE("torus neighbours") {
    SUBCASE("corner of 3x3 wraps both ways") {
        const SpinLattice l(3, InitMode::AllUp, 1);
        const auto nb = l.neighbors({0, 0});
        CHECK(nb[0] == Site{2, 0});
        CHECK(nb[1] == Site{1, 0});
        CHECK(nb[2] == Site{0, 2});
        CHECK(nb[3] == Site{0, 1});
    }
    SUBCASE("2x2 double-counts across the wrap") {
        const SpinLattice l(2, InitMode::AllUp, 1);
        auto nb = l.neighbors({0, 0});
        std::vector<Site> got(nb.begin(), nb.end());
        CHECK(std::count(got.begin(), got.end(), Site{1, 0}) == 2);
        CHECK(std::count(got.begin(), got.end(), Site{0, 1}) == 2);
    }
    SUBCASE("interior site of 4x4") {
        const SpinLattice l(4, InitMode::AllUp, 1);
        const auto nb = l.neighbors({2, 1});
        CHECK(nb[0] == Site{1, 1});
        CHECK(nb[1] == Site{3, 1});
        CHECK(nb[2] == Site{2, 0});
        CHECK(nb[3] == Site{2, 2});
    }
    SUBCASE("out of range") {
        const SpinLattice l(4, InitMode::AllUp, 1);
        CHECK_THROWS_AS((void)l.neighbors({4, 0}), Error);
        CHECK_THROWS_AS((void)l.neighbors({0, -1}), Error);
        CHECK_THROWS_AS((void)l.site_of(16), Error);
    }
}

TEST_CASE("neighbour relation is symmetric and never self for L >= 3") {
    for (int L : {2, 3, 4, 7, 16}) {
        const SpinLattice l(L, InitMode::AllUp, 1);
        for (int r = 0; r < L; ++r) {
            for (int c = 0; c < L; ++c) {
                const Site s{r, c};
                for (const Site n : l.neighbors(s)) {
                    CHECK(contains(l.neighbors(n), s));
                    if (L >= 3) CHECK_FALSE(n == s);
                }
            }
        }
    }
}

TEST_CASE("flat index round trip") {
    const SpinLattice l(5, InitMode::AllUp, 1);
    for (std::size_t i = 0; i < l.size(); ++i) {
        const Site s = l.site_of(i);
        CHECK(l.index_of(s) == i);
        CHECK(static_cast<std::size_t>(s.row * 5 + s.col) == i);
    }
}

TEST_CASE("magnetization examples") {
    auto l = SpinLattice::from_spins(2, {1, 1, 1, -1});
    CHECK(l.magnetization() == 0.5);
    l.set_spin(0, -1);
    CHECK(l.magnetization() == 0.0);
    CHECK_THROWS_AS(SpinLattice::from_spins(2, {1, 0, 1, 1}), Error);
    CHECK_THROWS_AS(SpinLattice::from_spins(2, {1, 1, 1}), Error);
}

TEST_CASE("incremental count survives random flips") {
    SpinLattice l(9, InitMode::Random, 99);
    Rng rng(5);
    for (int k = 0; k < 20000; ++k) {
        const auto i = rng.index(l.size());
        l.set_spin(i, rng.coin() ? 1 : -1);
        if (k % 997 == 0) {
            REQUIRE(l.up_count() == l.recount_up());
        }
    }
    CHECK(l.up_count() == l.recount_up());
    long long sum = 0;
    for (auto s : l.spins()) sum += s;
    CHECK(sum == l.spin_sum());
    CHECK(static_cast<double>(sum) == doctest::Approx(l.magnetization() * static_cast<double>(l.size())));
}
