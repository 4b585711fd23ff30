#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spinmarket/cli.hpp"
#include "spinmarket/error.hpp"

namespace spinmarket::cli {

namespace {

// Flags the user actually typed; unset ones leave the config-file/default value alone.
struct ModelFlags {
    std::optional<double> beta, alpha, coupling;
    std::optional<int> size;
    std::optional<long> sweeps, warmup, delta_t;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mapping, seeds, snapshot_at;
};

struct StatsFlags {
    std::optional<std::size_t> max_lag;
    std::optional<std::string> fit_window, out, config;
};

void add_model_flags(CLI::App* app, ModelFlags& f) {
    app->add_option("--beta", f.beta, "Inverse temperature (default 1.7)");
    app->add_option("--alpha", f.alpha, "Minority/frustration coupling (default 10)");
    app->add_option("--coupling", f.coupling, "Neighbour coupling J (default 1)");
    app->add_option("--size", f.size, "Lattice side L (default 32)");
    app->add_option("--sweeps", f.sweeps, "Total sweeps including warm-up (default 1000000)");
    app->add_option("--warmup", f.warmup, "Sweeps discarded before recording (default 100000)");
    app->add_option("--delta-t", f.delta_t, "Return sampling interval in sweeps (default 100)");
    app->add_option("--seed", f.seed, "RNG seed (default 1)");
    app->add_option("--snapshot-at", f.snapshot_at, "Comma-separated sweep indices for PGM snapshots");
}

void add_stats_flags(CLI::App* app, StatsFlags& f) {
    app->add_option("--max-lag", f.max_lag, "Largest ACF lag (default 150)");
    app->add_option("--fit-window", f.fit_window, "Power-law fit lags, e.g. 1,150");
    app->add_option("--out", f.out, "Output directory (default ./out)");
    app->add_option("--config", f.config, "TOML config file; flags override it");
}

std::vector<long> parse_schedule(const std::string& text) {
    std::vector<long> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stol(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorKind::Configuration, "invalid snapshot sweep '" + item + "'");
        }
    }
    return out;
}

ExperimentConfig resolve(const ModelFlags& m, const StatsFlags& s) {
    ExperimentConfig config;
    if (s.config) apply_config_file(config, *s.config);
    auto& p = config.params;
    if (m.beta) p.beta = *m.beta;
    if (m.alpha) p.alpha = *m.alpha;
    if (m.coupling) p.coupling = *m.coupling;
    if (m.size) p.side = *m.size;
    if (m.sweeps) p.sweeps = *m.sweeps;
    if (m.warmup) p.warmup = *m.warmup;
    if (m.delta_t) p.delta_t = *m.delta_t;
    if (m.seed) p.seed = *m.seed;
    if (m.mapping) config.mapping = parse_mapping(*m.mapping);
    if (m.seeds) config.seeds = parse_seed_range(*m.seeds);
    if (m.snapshot_at) config.snapshots = parse_schedule(*m.snapshot_at);
    if (s.max_lag) config.max_lag = *s.max_lag;
    if (s.fit_window) config.fit_window = parse_fit_window(*s.fit_window);
    if (s.out) config.out = *s.out;
    return config;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bornholdt spin-market simulator and stylized-facts toolkit", "spinmarket"};
    app.require_subcommand(1);

    ModelFlags sim_model;
    StatsFlags sim_stats;
    auto* simulate = app.add_subcommand("simulate", "Run the spin model and analyse its returns");
    add_model_flags(simulate, sim_model);
    add_stats_flags(simulate, sim_stats);
    simulate->add_option("--mapping", sim_model.mapping, "Return mapping: m-diff (default) or log-abs-m");
    simulate->add_option("--seeds", sim_model.seeds, "Batch seed range a..b, one subdirectory per seed");

    ModelFlags snap_model;
    StatsFlags snap_stats;
    auto* snapshot = app.add_subcommand("snapshot", "Write PGM lattice snapshots (stable and intermittent by default)");
    add_model_flags(snapshot, snap_model);
    snapshot->add_option("--out", snap_stats.out, "Output directory (default ./out)");
    snapshot->add_option("--config", snap_stats.config, "TOML config file; flags override it");

    StatsFlags an_stats;
    std::optional<std::string> csv, date_col, price_col;
    std::optional<long> an_delta_t;
    auto* analyze = app.add_subcommand("analyze", "Stylized facts of an index price CSV");
    add_stats_flags(analyze, an_stats);
    analyze->add_option("--csv", csv, "Price CSV with a header row");
    analyze->add_option("--date-col", date_col, "Date column (default Date)");
    analyze->add_option("--price-col", price_col, "Price column (default 'Adj Close')");
    analyze->add_option("--delta-t", an_delta_t, "Return interval in rows (default 1)");

    std::string report_a, report_b;
    std::string compare_out = ".";
    auto* compare = app.add_subcommand("compare", "Side-by-side comparison of two report.json files");
    compare->add_option("report_a", report_a, "First report.json")->required();
    compare->add_option("report_b", report_b, "Second report.json")->required();
    compare->add_option("--out", compare_out, "Directory for comparison.json (default .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(ErrorKind::Configuration);
    }

    try {
        if (simulate->parsed()) {
            const auto config = resolve(sim_model, sim_stats);
            if (config.seeds) {
                cmd_simulate_batch(config, err);
            } else {
                cmd_simulate(config, err);
            }
        } else if (snapshot->parsed()) {
            cmd_snapshot(resolve(snap_model, snap_stats), err);
        } else if (analyze->parsed()) {
            auto config = resolve(ModelFlags{}, an_stats);
            if (csv) config.csv = *csv;
            if (date_col) config.columns.date = *date_col;
            if (price_col) config.columns.price = *price_col;
            if (an_delta_t) config.analyze_delta_t = *an_delta_t;
            cmd_analyze(config, err);
        } else if (compare->parsed()) {
            cmd_compare(report_a, report_b, compare_out, out);
        }
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error (io): " << e.what() << '\n';
        return exit_code_for(ErrorKind::Io);
    } catch (const nlohmann::json::exception& e) {
        err << "error (parse): " << e.what() << '\n';
        return exit_code_for(ErrorKind::Parse);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace spinmarket::cli
