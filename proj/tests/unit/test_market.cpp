#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spinmarket/error.hpp"
#include "spinmarket/market.hpp"
#include "support/oracles.hpp"

using namespace spinmarket;
namespace fs = std::filesystem;

namespace {

void check_moments(const std::vector<double>& z) {
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= static_cast<double>(z.size());
    double var = 0.0;
    for (double v : z) var += (v - mean) * (v - mean);
    var /= static_cast<double>(z.size());
    CHECK(std::fabs(mean) < 1e-9);
    CHECK(std::fabs(std::sqrt(var) - 1.0) < 1e-9);
}

}  // namespace

TEST_CASE("magnetization differences") {
    const std::vector<double> m{0.0, 0.5, 0.2};
    const auto r = magnetization_differences(m, 1);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(0.5));
    CHECK(r[1] == doctest::Approx(-0.3));

    const std::vector<double> m2{0.1, 0.2, 0.4, 0.8, 0.0};
    const auto r2 = magnetization_differences(m2, 2);
    REQUIRE(r2.size() == 2);
    CHECK(r2[0] == doctest::Approx(0.3));
    CHECK(r2[1] == doctest::Approx(-0.4));
}

TEST_CASE("return count is floor((len - 1) / delta_t)") {
    const std::vector<double> m(900'000, 0.0);
    CHECK(magnetization_differences(m, 100).size() == 8'999);
    for (std::size_t len : {4u, 5u, 17u, 100u, 101u}) {
        for (long dt : {1L, 2L, 3L}) {
            if (len < 2 * static_cast<std::size_t>(dt)) continue;
            const std::vector<double> x(len, 0.1);
            CHECK(magnetization_differences(x, dt).size() == (len - 1) / static_cast<std::size_t>(dt));
        }
    }
}

TEST_CASE("short series is insufficient") {
    const std::vector<double> m(199, 0.0);
    try {
        (void)magnetization_differences(m, 100);
        FAIL("expected insufficient-data");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientData);
    }
}

TEST_CASE("constant magnetization has degenerate returns") {
    MagnetizationSeries s;
    s.values.assign(50, 0.3);
    try {
        (void)magnetization_to_returns(s, 1);
        FAIL("expected degenerate-variance");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateVariance);
    }
}

TEST_CASE("log-abs-m mapping floors |m|") {
    const std::vector<double> m{0.5, -0.25, 0.0};
    const auto r = magnetization_differences(m, 1, Mapping::LogAbsM);
    CHECK(r[0] == doctest::Approx(std::log(0.25) - std::log(0.5)));
    CHECK(r[1] == doctest::Approx(std::log(1e-6) - std::log(0.25)));
    CHECK(parse_mapping("log-abs-m") == Mapping::LogAbsM);
    CHECK(parse_mapping("m-diff") == Mapping::MDiff);
    CHECK_THROWS_AS((void)parse_mapping("price"), Error);
}

TEST_CASE("raw m-diff returns stay within [-2, 2]") {
    oracle::Gaussian g(5);
    std::vector<double> m(5000);
    for (auto& v : m) v = g.uniform() * 2.0 - 1.0;
    for (double r : magnetization_differences(m, 3)) CHECK(std::fabs(r) <= 2.0);
}

TEST_CASE("standardize") {
    const std::vector<double> two{1.0, 3.0};
    const auto z = standardize(two);
    CHECK(z[0] == -1.0);
    CHECK(z[1] == 1.0);

    const std::vector<double> flat{5.0, 5.0, 5.0};
    CHECK_THROWS_AS((void)standardize(flat), Error);
    const std::vector<double> one{5.0};
    CHECK_THROWS_AS((void)standardize(one), Error);
}

TEST_CASE("standardize is idempotent and affine invariant") {
    const auto x = oracle::normal_sample(8, 2000);
    const auto z = standardize(x);
    check_moments(z);
    const auto zz = standardize(z);
    for (std::size_t i = 0; i < z.size(); ++i) REQUIRE(std::fabs(zz[i] - z[i]) < 1e-9);

    for (const auto& [a, b] : {std::pair{3.5, -2.0}, std::pair{0.01, 100.0}, std::pair{-2.0, 1.0}}) {
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] + b;
        const auto zy = standardize(y);
        const double sign = a > 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(std::fabs(zy[i] - sign * z[i]) < 1e-9);
    }
}

TEST_CASE("returns CSV and sidecar") {
    ReturnSeries r;
    r.values = {0.25, -1.5};
    r.delta_t = 100;
    r.standardized = true;
    r.mapping = Mapping::MDiff;
    const auto dir = fs::temp_directory_path() / "spinmarket_returns_test";
    fs::create_directories(dir);
    write_returns_csv(r, dir / "returns.csv");
    write_returns_sidecar(r, dir / "returns.json", 42);

    std::ifstream in(dir / "returns.csv");
    std::stringstream text;
    text << in.rdbuf();
    CHECK(text.str() == "index,return\n0,0.25\n1,-1.5\n");

    std::ifstream js(dir / "returns.json");
    const auto j = nlohmann::json::parse(js);
    CHECK(j["delta_t"] == 100);
    CHECK(j["mapping"] == "m-diff");
    CHECK(j["source"] == "simulated");
    CHECK(j["seed"] == 42);
    CHECK(j["rng"] == "mt19937_64");
    fs::remove_all(dir);
}
