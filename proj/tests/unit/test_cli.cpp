#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinmarket/cli.hpp"
#include "spinmarket/error.hpp"
#include "support/oracles.hpp"

using namespace spinmarket;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"spinmarket"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : storage) argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

nlohmann::json load_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("spinmarket_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

const std::initializer_list<std::string> kSmallRun{"--size", "8", "--sweeps", "3000", "--warmup", "500",
                                                   "--delta-t", "5", "--max-lag", "30", "--fit-window", "1,30"};

std::vector<std::string> small_args(std::initializer_list<std::string> extra) {
    // Subcommand first, then the shared small-run flags, then the rest.
    std::vector<std::string> v(extra.begin(), extra.begin() + 1);
    v.insert(v.end(), kSmallRun.begin(), kSmallRun.end());
    v.insert(v.end(), extra.begin() + 1, extra.end());
    return v;
}

CliResult run_vec(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"spinmarket"};
    for (const auto& s : args) argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Writes a Date,Adj Close file whose log returns are the given increments.
void write_prices(const fs::path& path, const std::vector<double>& increments) {
    std::ofstream out(path);
    out << "Date,Adj Close\n";
    double log_price = std::log(100.0);
    auto day = std::chrono::sys_days{std::chrono::year{1990} / 1 / 1};
    for (std::size_t i = 0; i <= increments.size(); ++i) {
        const std::chrono::year_month_day ymd{day};
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        char price[32];
        std::snprintf(price, sizeof price, "%.17g", std::exp(log_price));
        out << buf << ',' << price << '\n';
        if (i < increments.size()) log_price += increments[i];
        day += std::chrono::days{1};
    }
}

}  // namespace

TEST_CASE("help and usage errors") {
    CHECK(run_cli({"--help"}).code == 0);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"simulate", "--no-such-flag"}).code == 2);
    CHECK(run_cli({"simulate", "--beta", "abc"}).code == 2);
}

TEST_CASE("configuration errors exit with 2") {
    TempDir dir("config_errors");
    const auto r = run_cli({"simulate", "--sweeps", "10", "--warmup", "20", "--out", dir.path.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("configuration") != std::string::npos);
    CHECK(run_cli({"simulate", "--size", "8", "--sweeps", "100", "--warmup", "90", "--delta-t", "6", "--out",
                   dir.path.string()})
              .code == 2);
    CHECK(run_cli({"simulate", "--mapping", "price", "--out", dir.path.string()}).code == 2);
    CHECK(run_cli({"simulate", "--fit-window", "5", "--out", dir.path.string()}).code == 2);
}

TEST_CASE("simulate writes every artifact with provenance") {
    TempDir dir("simulate");
    const auto out = dir.path / "run";
    const auto r = run_vec(small_args({"simulate", "--seed", "5", "--snapshot-at", "0,3000", "--out", out.string()}));
    REQUIRE_MESSAGE(r.code == 0, r.err);
    for (const char* f : {"magnetization.csv", "returns.csv", "returns.json", "report.json", "acf_returns.csv",
                          "acf_abs_returns.csv", "config.toml", "snapshots/sweep-00000000.pgm",
                          "snapshots/sweep-00003000.pgm"}) {
        CHECK_MESSAGE(fs::exists(out / f), f);
    }
    const auto report = load_json(out / "report.json");
    CHECK(report["powerlaw"].contains("eta"));
    CHECK(report["provenance"]["seed"] == 5);
    CHECK(report["provenance"]["rng"] == "mt19937_64");
    CHECK(report["provenance"]["params"]["sweeps"] == 3000);
    CHECK(report["n"] == (2500 - 1) / 5);
    CHECK(slurp(out / "magnetization.csv").starts_with("sweep,m\n501,"));
}

TEST_CASE("identical config and seed give byte-identical outputs") {
    TempDir dir("determinism");
    const auto a = dir.path / "a";
    const auto b = dir.path / "b";
    REQUIRE(run_vec(small_args({"simulate", "--seed", "11", "--out", a.string()})).code == 0);
    REQUIRE(run_vec(small_args({"simulate", "--seed", "11", "--out", b.string()})).code == 0);
    CHECK(slurp(a / "returns.csv") == slurp(b / "returns.csv"));
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "magnetization.csv") == slurp(b / "magnetization.csv"));

    const auto c = dir.path / "c";
    REQUIRE(run_vec(small_args({"simulate", "--seed", "12", "--out", c.string()})).code == 0);
    CHECK(slurp(a / "returns.csv") != slurp(c / "returns.csv"));
}

TEST_CASE("flags override the config file which overrides defaults") {
    TempDir dir("precedence");
    const auto cfg = dir.path / "exp.toml";
    std::ofstream(cfg) << "size = 6\nsweeps = 2000\nwarmup = 400\ndelta_t = 4\nseed = 3\nbeta = 1.1\n"
                          "max_lag = 20\nfit_window = [1, 20]\nmapping = \"log-abs-m\"\n";
    const auto out = dir.path / "run";
    const auto r = run_cli({"simulate", "--config", cfg.string(), "--seed", "9", "--out", out.string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto prov = load_json(out / "report.json")["provenance"];
    CHECK(prov["seed"] == 9);                  // flag wins
    CHECK(prov["params"]["size"] == 6);        // from file
    CHECK(prov["params"]["beta"] == 1.1);      // from file
    CHECK(prov["params"]["alpha"] == 10.0);    // default
    CHECK(prov["mapping"] == "log-abs-m");     // from file
    CHECK(slurp(out / "config.toml").find("seed = 9") != std::string::npos);

    // The recorded config reproduces the run.
    const auto again = dir.path / "again";
    REQUIRE(run_cli({"simulate", "--config", (out / "config.toml").string(), "--out", again.string()}).code == 0);
    CHECK(slurp(out / "returns.csv") == slurp(again / "returns.csv"));
}

TEST_CASE("bad config files") {
    TempDir dir("bad_config");
    const auto unknown = dir.path / "unknown.toml";
    std::ofstream(unknown) << "temperature = 3\n";
    CHECK(run_cli({"simulate", "--config", unknown.string()}).code == 2);

    const auto broken = dir.path / "broken.toml";
    std::ofstream(broken) << "beta = = 2\n";
    CHECK(run_cli({"simulate", "--config", broken.string()}).code == 1);

    CHECK(run_cli({"simulate", "--config", (dir.path / "missing.toml").string()}).code == 1);

    const auto wrong_type = dir.path / "wrong.toml";
    std::ofstream(wrong_type) << "sweeps = \"many\"\n";
    CHECK(run_cli({"simulate", "--config", wrong_type.string()}).code == 2);
}

TEST_CASE("seed batches write one directory per seed") {
    TempDir dir("batch");
    const auto r = run_vec(small_args({"simulate", "--seeds", "3..5", "--out", dir.path.string()}));
    REQUIRE_MESSAGE(r.code == 0, r.err);
    for (int s : {3, 4, 5}) {
        const auto sub = dir.path / ("seed-" + std::to_string(s));
        CHECK(fs::exists(sub / "report.json"));
        CHECK(load_json(sub / "report.json")["provenance"]["seed"] == s);
    }
    // Batch members match single runs with the same seed.
    const auto single = dir.path / "single";
    REQUIRE(run_vec(small_args({"simulate", "--seed", "4", "--out", single.string()})).code == 0);
    CHECK(slurp(single / "returns.csv") == slurp(dir.path / "seed-4" / "returns.csv"));
}

TEST_CASE("snapshot picks a stable and an intermittent sweep") {
    TempDir dir("snapshot");
    const auto r = run_cli({"snapshot", "--size", "16", "--sweeps", "6000", "--warmup", "1000", "--seed", "2",
                            "--out", dir.path.string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto summary = load_json(dir.path / "snapshots.json");
    REQUIRE(summary["snapshots"].size() == 2);
    CHECK(summary["stable"]["window_std"].get<double>() <= summary["intermittent"]["window_std"].get<double>());
    for (const auto& s : summary["snapshots"]) {
        const auto lattice = read_snapshot(dir.path / "snapshots" / s["file"].get<std::string>());
        CHECK(lattice.side() == 16);
        CHECK(lattice.magnetization() == s["m"].get<double>());
    }
    const auto fixed = run_cli({"snapshot", "--size", "8", "--sweeps", "100", "--warmup", "10", "--snapshot-at",
                                "5,50", "--out", (dir.path / "fixed").string()});
    CHECK(fixed.code == 0);
    CHECK(fs::exists(dir.path / "fixed" / "snapshots" / "sweep-00000050.pgm"));
}

TEST_CASE("analyze the shipped fixture") {
    TempDir dir("analyze");
    const auto r = run_cli({"analyze", "--csv", (fs::path(SPINMARKET_FIXTURE_DIR) / "synthetic_gbm_100.csv").string(),
                            "--max-lag", "20", "--fit-window", "1,20", "--out", dir.path.string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto report = load_json(dir.path / "report.json");
    CHECK(report["n"] == 99);
    CHECK(report["provenance"]["input_sha256"].get<std::string>().size() == 64);
    CHECK(report["provenance"]["rows"] == 100);
    CHECK(fs::exists(dir.path / "acf_abs_returns.csv"));
}

TEST_CASE("analyze errors") {
    TempDir dir("analyze_errors");
    CHECK(run_cli({"analyze", "--csv", (dir.path / "missing.csv").string(), "--out", dir.path.string()}).code == 1);
    CHECK(run_cli({"analyze", "--out", dir.path.string()}).code == 2);
    const auto bad = dir.path / "bad.csv";
    std::ofstream(bad) << "Date,Adj Close\n2020-01-01,10\n2020-01-01,11\n";
    const auto r = run_cli({"analyze", "--csv", bad.string(), "--out", dir.path.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("line 3") != std::string::npos);
    const auto tiny = dir.path / "tiny.csv";
    std::ofstream(tiny) << "Date,Adj Close\n2020-01-01,10\n2020-01-02,11\n2020-01-03,12\n";
    CHECK(run_cli({"analyze", "--csv", tiny.string(), "--out", dir.path.string()}).code == 3);
}

TEST_CASE("GBM prices pass Jarque-Bera; Student-t prices are leptokurtic") {
    TempDir dir("gbm");
    int accepted = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        oracle::Gaussian g(900 + trial);
        std::vector<double> inc(1500);
        for (auto& v : inc) v = 0.0002 + 0.01 * g();
        const auto csv = dir.path / "gbm.csv";
        write_prices(csv, inc);
        cli::ExperimentConfig config;
        config.csv = csv;
        config.out = dir.path / "gbm_out";
        std::ostringstream log;
        accepted += cli::cmd_analyze(config, log).jarque_bera.p_value > 0.05;
    }
    CHECK(accepted >= 90);

    oracle::Gaussian g(4242);
    std::vector<double> inc(3000);
    for (auto& v : inc) v = 0.01 * g.student_t(3);
    const auto csv = dir.path / "student.csv";
    write_prices(csv, inc);
    const auto r = run_cli({"analyze", "--csv", csv.string(), "--out", (dir.path / "t_out").string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(load_json(dir.path / "t_out" / "report.json")["kurtosis_raw"].get<double>() > 3.0);
}

TEST_CASE("compare") {
    TempDir dir("compare");
    const auto a = dir.path / "a";
    const auto b = dir.path / "b";
    REQUIRE(run_vec(small_args({"simulate", "--seed", "1", "--out", a.string()})).code == 0);
    REQUIRE(run_vec(small_args({"simulate", "--seed", "2", "--out", b.string()})).code == 0);

    const auto same = run_cli({"compare", (a / "report.json").string(), (a / "report.json").string(), "--out",
                               (dir.path / "same").string()});
    REQUIRE_MESSAGE(same.code == 0, same.err);
    const auto cmp = load_json(dir.path / "same" / "comparison.json");
    for (const auto& [name, row] : cmp["statistics"].items()) {
        if (!row["diff"].is_null()) CHECK_MESSAGE(row["diff"].get<double>() == 0.0, name);
    }
    CHECK(cmp["acf_returns"]["max_abs_diff"] == 0.0);
    CHECK(cmp["acf_abs_returns"]["max_abs_diff"] == 0.0);

    const auto diff = run_cli({"compare", (a / "report.json").string(), (b / "report.json").string(), "--out",
                               (dir.path / "diff").string()});
    REQUIRE(diff.code == 0);
    CHECK(diff.out.find("powerlaw_eta") != std::string::npos);
    const auto both = load_json(dir.path / "diff" / "comparison.json")["statistics"]["powerlaw_eta"];
    CHECK(both["a"] == load_json(a / "report.json")["powerlaw"]["eta"]);
    CHECK(both["b"] == load_json(b / "report.json")["powerlaw"]["eta"]);

    const auto broken = dir.path / "broken.json";
    std::ofstream(broken) << "{\"schema_version\": 1,";
    CHECK(run_cli({"compare", broken.string(), (a / "report.json").string()}).code == 1);
    const auto future = dir.path / "future.json";
    std::ofstream(future) << "{\"schema_version\": 7}";
    CHECK(run_cli({"compare", future.string(), (a / "report.json").string()}).code == 1);
}

TEST_CASE("helpers") {
    CHECK(cli::parse_fit_window("1,150") == stats::LagWindow{1, 150});
    CHECK(cli::parse_fit_window("2:40") == stats::LagWindow{2, 40});
    CHECK(cli::parse_fit_window("3..9") == stats::LagWindow{3, 9});
    CHECK_THROWS_AS((void)cli::parse_fit_window("x,1"), Error);
    const auto seeds = cli::parse_seed_range("1..10");
    CHECK(seeds.first == 1);
    CHECK(seeds.last == 10);
    CHECK(cli::parse_seed_range("4").last == 4);
    CHECK_THROWS_AS((void)cli::parse_seed_range("5..2"), Error);

    TempDir dir("sha");
    std::ofstream(dir.path / "abc.txt") << "abc";
    CHECK(cli::sha256_file(dir.path / "abc.txt") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
