#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "spinmarket/cli.hpp"
#include "spinmarket/error.hpp"
#include "spinmarket/format.hpp"

#ifndef SPINMARKET_VERSION
#define SPINMARKET_VERSION "unknown"
#endif

namespace spinmarket::cli {

namespace fs = std::filesystem;

namespace {

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

Json params_json(const ModelParams& p) {
    Json j;
    j["beta"] = p.beta;
    j["alpha"] = p.alpha;
    j["coupling"] = p.coupling;
    j["size"] = p.side;
    j["sweeps"] = p.sweeps;
    j["warmup"] = p.warmup;
    j["delta_t"] = p.delta_t;
    j["seed"] = p.seed;
    return j;
}

Json simulation_provenance(const ExperimentConfig& config) {
    Json j;
    j["generator"] = "spinmarket";
    j["version"] = SPINMARKET_VERSION;
    j["dynamics"] = "heat-bath, random sequential site selection";
    j["rng"] = Rng::kName;
    j["seed"] = config.params.seed;
    j["params"] = params_json(config.params);
    j["mapping"] = to_string(config.mapping);
    j["max_lag"] = config.max_lag;
    j["fit_window"] = {config.fit_window.min, config.fit_window.max};
    return j;
}

ReportOptions report_options(const ExperimentConfig& config) {
    ReportOptions options;
    options.max_lag = config.max_lag;
    options.fit_window = config.fit_window;
    return options;
}

fs::path snapshot_path(const fs::path& dir, long sweep) {
    std::ostringstream name;
    name << "sweep-" << std::setw(8) << std::setfill('0') << sweep << ".pgm";
    return dir / name.str();
}

void write_outputs(const fs::path& dir, const ReturnSeries& returns, const StatsReport& report,
                   std::optional<std::uint64_t> seed) {
    write_returns_csv(returns, dir / "returns.csv");
    write_returns_sidecar(returns, dir / "returns.json", seed);
    write_report(report, dir / "report.json");
    write_acf_csv(report.acf_returns, dir / "acf_returns.csv");
    write_acf_csv(report.acf_abs_returns, dir / "acf_abs_returns.csv");
}

std::string fixed(double v, int precision = 4) {
    if (!std::isfinite(v)) return "nan";
    std::ostringstream s;
    if (v != 0.0 && (std::fabs(v) < 1e-3 || std::fabs(v) >= 1e6)) {
        s << std::scientific << std::setprecision(precision - 1) << v;
    } else {
        s << std::fixed << std::setprecision(precision) << v;
    }
    return s.str();
}

}  // namespace

SimulateOutcome cmd_simulate(const ExperimentConfig& config, std::ostream& log) {
    config.validate_simulation();
    ensure_directory(config.out);

    const auto& p = config.params;
    log << "simulate: L=" << p.side << " beta=" << p.beta << " alpha=" << p.alpha << " J=" << p.coupling
        << " sweeps=" << p.sweeps << " warmup=" << p.warmup << " delta_t=" << p.delta_t << " seed=" << p.seed
        << '\n';

    const auto result = run_simulation(p, config.snapshots);
    const auto returns = magnetization_to_returns(result.series, p.delta_t, config.mapping);
    auto report = build_report(returns, report_options(config));
    report.provenance = simulation_provenance(config);

    SimulateOutcome outcome;
    outcome.directory = config.out;
    const std::size_t window = std::min(config.regime_window, result.series.values.size() / 2);
    if (window >= 2) outcome.regimes = stats::regime_contrast(result.series.values, window);

    write_magnetization_csv(result.series, config.out / "magnetization.csv");
    write_outputs(config.out, returns, report, p.seed);
    write_text(config.out / "config.toml", to_toml(config));
    if (!result.snapshots.empty()) {
        const auto dir = config.out / "snapshots";
        ensure_directory(dir);
        for (const auto& snap : result.snapshots) {
            export_snapshot(snap.lattice, snapshot_path(dir, snap.sweep), snap.sweep, p);
        }
    }

    log << "simulate: " << returns.values.size() << " returns, kurtosis=" << fixed(report.kurtosis_raw)
        << " eta=" << fixed(report.powerlaw.eta) << " -> " << config.out.string() << '\n';
    outcome.report = std::move(report);
    return outcome;
}

std::vector<SimulateOutcome> cmd_simulate_batch(const ExperimentConfig& config, std::ostream& log) {
    if (!config.seeds) return {cmd_simulate(config, log)};
    const auto [first, last] = *config.seeds;
    const std::size_t count = static_cast<std::size_t>(last - first) + 1;

    // Validate up front so a bad config fails before any thread starts.
    config.validate_simulation();

    std::vector<SimulateOutcome> outcomes(count);
    std::vector<std::exception_ptr> errors(count);
    std::mutex log_mutex;
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            ExperimentConfig run = config;
            run.seeds.reset();
            run.params.seed = first + i;
            run.out = config.out / ("seed-" + std::to_string(run.params.seed));
            std::ostringstream local;
            try {
                outcomes[i] = cmd_simulate(run, local);
            } catch (...) {
                errors[i] = std::current_exception();
            }
            std::lock_guard lock(log_mutex);
            log << local.str();
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, count);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return outcomes;
}

StatsReport cmd_analyze(const ExperimentConfig& config, std::ostream& log) {
    if (!config.csv) throw Error(ErrorKind::Configuration, "analyze needs --csv");
    if (config.analyze_delta_t < 1) throw Error(ErrorKind::Configuration, "delta-t must be >= 1");
    if (config.fit_window.max > config.max_lag) {
        throw Error(ErrorKind::Configuration, "fit window exceeds max-lag");
    }

    const auto prices = load_price_csv(*config.csv, config.columns);
    log << "analyze: " << prices.size() << " prices from " << config.csv->string() << '\n';
    auto returns = stats::log_returns(prices.prices, config.analyze_delta_t);
    returns.values = standardize(returns.values);
    returns.standardized = true;

    auto report = build_report(returns, report_options(config));
    Json prov;
    prov["generator"] = "spinmarket";
    prov["version"] = SPINMARKET_VERSION;
    prov["input"] = config.csv->filename().string();
    prov["input_sha256"] = sha256_file(*config.csv);
    prov["rows"] = prices.rows_read;
    prov["first_date"] = prices.dates.front();
    prov["last_date"] = prices.dates.back();
    prov["date_column"] = config.columns.date;
    prov["price_column"] = config.columns.price;
    prov["delta_t"] = config.analyze_delta_t;
    prov["max_lag"] = config.max_lag;
    prov["fit_window"] = {config.fit_window.min, config.fit_window.max};
    report.provenance = std::move(prov);

    ensure_directory(config.out);
    write_outputs(config.out, returns, report, std::nullopt);
    log << "analyze: kurtosis=" << fixed(report.kurtosis_raw) << " skew=" << fixed(report.skewness)
        << " eta=" << fixed(report.powerlaw.eta) << " -> " << config.out.string() << '\n';
    return report;
}

Json cmd_compare(const fs::path& report_a, const fs::path& report_b, const fs::path& out_dir,
                 std::ostream& table) {
    const auto a = read_report(report_a);
    const auto b = read_report(report_b);

    struct Row {
        const char* name;
        double a;
        double b;
    };
    const std::vector<Row> rows{
        {"n", static_cast<double>(a.n), static_cast<double>(b.n)},
        {"skewness", a.skewness, b.skewness},
        {"kurtosis_raw", a.kurtosis_raw, b.kurtosis_raw},
        {"kurtosis_excess", a.kurtosis_excess, b.kurtosis_excess},
        {"jb_stat", a.jarque_bera.statistic, b.jarque_bera.statistic},
        {"jb_pvalue", a.jarque_bera.p_value, b.jarque_bera.p_value},
        {"sw_stat", a.shapiro_wilk.statistic, b.shapiro_wilk.statistic},
        {"sw_pvalue", a.shapiro_wilk.p_value, b.shapiro_wilk.p_value},
        {"powerlaw_A", a.powerlaw.amplitude, b.powerlaw.amplitude},
        {"powerlaw_eta", a.powerlaw.eta, b.powerlaw.eta},
        {"powerlaw_r2", a.powerlaw.r_squared, b.powerlaw.r_squared},
    };

    Json j;
    j["schema_version"] = kReportSchemaVersion;
    j["a"] = report_a.string();
    j["b"] = report_b.string();
    Json stats_json = Json::object();
    for (const auto& r : rows) {
        const auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
        stats_json[r.name] = {{"a", num(r.a)}, {"b", num(r.b)}, {"diff", num(r.a - r.b)}};
    }
    j["statistics"] = std::move(stats_json);

    const auto lag_diffs = [](const stats::AcfCurve& x, const stats::AcfCurve& y) {
        const std::size_t common = std::min(x.rho.size(), y.rho.size());
        Json out;
        out["lags"] = std::vector<std::size_t>(x.lags.begin(), x.lags.begin() + static_cast<long>(common));
        std::vector<double> diff(common);
        for (std::size_t i = 0; i < common; ++i) diff[i] = x.rho[i] - y.rho[i];
        out["diff"] = diff;
        double max_abs = 0.0;
        for (double d : diff) max_abs = std::max(max_abs, std::fabs(d));
        out["max_abs_diff"] = max_abs;
        return out;
    };
    j["acf_returns"] = lag_diffs(a.acf_returns, b.acf_returns);
    j["acf_abs_returns"] = lag_diffs(a.acf_abs_returns, b.acf_abs_returns);

    ensure_directory(out_dir);
    write_text(out_dir / "comparison.json", j.dump(2) + "\n");

    table << std::left << std::setw(18) << "statistic" << std::right << std::setw(16) << "A" << std::setw(16)
          << "B" << std::setw(16) << "A-B" << '\n';
    for (const auto& r : rows) {
        table << std::left << std::setw(18) << r.name << std::right << std::setw(16) << fixed(r.a)
              << std::setw(16) << fixed(r.b) << std::setw(16) << fixed(r.a - r.b) << '\n';
    }
    table << std::left << std::setw(18) << "max|dACF|" << std::right << std::setw(48)
          << fixed(j["acf_returns"]["max_abs_diff"].get<double>()) << '\n';
    table << std::left << std::setw(18) << "max|dACF abs|" << std::right << std::setw(48)
          << fixed(j["acf_abs_returns"]["max_abs_diff"].get<double>()) << '\n';
    return j;
}

std::vector<long> cmd_snapshot(const ExperimentConfig& config, std::ostream& log) {
    config.params.validate();
    std::vector<long> schedule = config.snapshots;
    Json summary;
    summary["provenance"] = simulation_provenance(config);

    if (schedule.empty()) {
        const auto first = run_simulation(config.params);
        const auto& m = first.series.values;
        const std::size_t window = std::min(config.regime_window, m.size() / 2);
        if (window < 2) {
            throw Error(ErrorKind::InsufficientData, "run too short to locate regimes; pass --snapshot-at");
        }
        const auto rc = stats::regime_contrast(m, window);
        const auto middle = [&](std::size_t w) {
            return config.params.warmup + static_cast<long>(w * window + window / 2) + 1;
        };
        schedule = {middle(rc.quietest_window), middle(rc.volatile_window)};
        summary["regime_window"] = window;
        summary["stable"] = {{"sweep", schedule[0]}, {"window_std", rc.quietest}};
        summary["intermittent"] = {{"sweep", schedule[1]}, {"window_std", rc.most_volatile}};
        log << "snapshot: quietest window std=" << fixed(rc.quietest)
            << ", most volatile std=" << fixed(rc.most_volatile) << '\n';
    }

    const auto result = run_simulation(config.params, schedule);
    const auto dir = config.out / "snapshots";
    ensure_directory(dir);
    std::vector<long> taken;
    Json files = Json::array();
    for (const auto& snap : result.snapshots) {
        const auto path = snapshot_path(dir, snap.sweep);
        export_snapshot(snap.lattice, path, snap.sweep, config.params);
        files.push_back({{"sweep", snap.sweep},
                         {"file", path.filename().string()},
                         {"m", snap.lattice.magnetization()}});
        taken.push_back(snap.sweep);
        log << "snapshot: sweep " << snap.sweep << " -> " << path.string() << '\n';
    }
    summary["snapshots"] = std::move(files);
    write_text(config.out / "snapshots.json", summary.dump(2) + "\n");
    return taken;
}

}  // namespace spinmarket::cli
