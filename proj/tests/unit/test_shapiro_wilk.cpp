#include <doctest.h>

#include <cmath>
#include <vector>

#include "spinmarket/error.hpp"
#include "spinmarket/stats.hpp"
#include "support/oracles.hpp"

using namespace spinmarket;
using namespace spinmarket::stats;

// Reference values come from an independent single-precision AS R94
// implementation (the Fortran swilk routine), hence the 1e-4 tolerance.
struct Reference {
    std::vector<double> data;
    double w;
    double p;
};

TEST_CASE("Shapiro-Wilk weights example") {
    // Weights of eleven men, the worked example of the original 1965 test;
    // the published statistic is W = 0.79.
    const std::vector<double> weights{148, 154, 158, 160, 161, 162, 166, 170, 182, 195, 236};
    const auto r = shapiro_wilk(weights);
    CHECK(std::fabs(r.statistic - 0.79) < 5e-3);
    CHECK(std::fabs(r.statistic - 0.7888146948631716) < 1e-3);
    CHECK(r.p_value == doctest::Approx(0.006703814061898823).epsilon(1e-3));
}

TEST_CASE("Shapiro-Wilk reference values") {
    const std::vector<Reference> cases{
        {{1, 2, 4}, 0.964285714285714, 0.636886845028969},
        {{0, 1, 5, 6.5}, 0.902551026576033, 0.443840705923552},
        {{2.1, 3.4, 1.9, 5.6, 4.4}, 0.932084939195386, 0.610655902260484},
        {{1, 3, 2, 8, 5, 13}, 0.90501414241779, 0.404415532938467},
        {{0.139, 0.157, 0.175, 0.256, 0.344, 0.413, 0.503, 0.577, 0.614, 0.655, 0.954, 1.392, 1.557,
          1.648, 1.690, 1.994, 2.174, 2.206, 3.245, 3.510, 3.571, 4.354, 4.980, 6.084, 8.351},
         0.834666275338149, 0.000913490482588737},
    };
    for (const auto& c : cases) {
        const auto r = shapiro_wilk(c.data);
        CHECK(std::fabs(r.statistic - c.w) < 1e-4);
        CHECK(r.p_value == doctest::Approx(c.p).epsilon(2e-3));
    }

    std::vector<double> gen(60);
    for (std::size_t i = 0; i < gen.size(); ++i) gen[i] = static_cast<double>(i * 37 % 101) / 10.0 + static_cast<double>(i % 7) * 0.3;
    const auto g = shapiro_wilk(gen);
    CHECK(std::fabs(g.statistic - 0.966287295199354) < 1e-4);
    CHECK(g.p_value == doctest::Approx(0.0958505348191743).epsilon(2e-3));

    std::vector<double> wave(400);
    for (std::size_t i = 0; i < wave.size(); ++i) wave[i] = std::sin(static_cast<double>(i) * 1.3) + 0.01 * static_cast<double>(i);
    const auto s = shapiro_wilk(wave);
    CHECK(std::fabs(s.statistic - 0.98682886009023) < 1e-4);
    CHECK(s.p_value == doctest::Approx(0.00108822798042839).epsilon(5e-3));
}

TEST_CASE("Shapiro-Wilk n = 3 is exact") {
    const std::vector<double> even{1, 2, 3};
    const auto r = shapiro_wilk(even);
    CHECK(r.statistic == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.p_value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Shapiro-Wilk domain") {
    const std::vector<double> two{1, 2};
    CHECK_THROWS_AS((void)shapiro_wilk(two), Error);
    const auto big = oracle::normal_sample(3, 5001);
    try {
        (void)shapiro_wilk(big);
        FAIL("expected range error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Range);
        CHECK(std::string(e.what()).find("subsample") != std::string::npos);
    }
    const auto sub = stride_subsample(big, kShapiroWilkMaxN);
    CHECK(sub.size() <= kShapiroWilkMaxN);
    CHECK(sub[1] == big[2]);
    CHECK_NOTHROW((void)shapiro_wilk(sub));

    const std::vector<double> flat(10, 4.0);
    try {
        (void)shapiro_wilk(flat);
        FAIL("expected degenerate-variance");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateVariance);
    }
}

TEST_CASE("Shapiro-Wilk W stays in (0, 1]") {
    oracle::Gaussian g(77);
    for (std::size_t n : {3u, 4u, 5u, 7u, 11u, 12u, 50u, 1000u, 5000u}) {
        std::vector<double> x(n);
        for (auto& v : x) v = g.student_t(2);
        const auto r = shapiro_wilk(x);
        CHECK(r.statistic > 0.0);
        CHECK(r.statistic <= 1.0);
        CHECK(r.p_value >= 0.0);
        CHECK(r.p_value <= 1.0);
    }
}

TEST_CASE("Shapiro-Wilk calibration on normal and uniform samples") {
    int normal_accept = 0;
    int uniform_reject = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        normal_accept += shapiro_wilk(oracle::normal_sample(1000 + trial, 500)).p_value > 0.05;
        oracle::Gaussian g(5000 + trial);
        std::vector<double> u(500);
        for (auto& v : u) v = g.uniform();
        uniform_reject += shapiro_wilk(u).p_value < 0.05;
    }
    CHECK(normal_accept >= 90);
    CHECK(uniform_reject >= 90);
}
