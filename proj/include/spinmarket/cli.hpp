#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinmarket/dynamics.hpp"
#include "spinmarket/ingestion.hpp"
#include "spinmarket/market.hpp"
#include "spinmarket/report.hpp"

namespace spinmarket::cli {

struct SeedRange {
    std::uint64_t first = 0;
    std::uint64_t last = 0;
};

struct ExperimentConfig {
    ModelParams params;
    Mapping mapping = Mapping::MDiff;
    std::size_t max_lag = 150;
    stats::LagWindow fit_window{1, 150};
    std::filesystem::path out = "out";
    std::vector<long> snapshots;
    std::optional<std::filesystem::path> csv;
    CsvColumns columns;
    long analyze_delta_t = 1;
    std::optional<SeedRange> seeds;
    std::size_t regime_window = 1000;

    /// Throws Error{Configuration}. Also checks that the recorded span yields
    /// at least one return: (sweeps - warmup) >= 2 * delta_t.
    void validate_simulation() const;
};

/// Overlays keys from a TOML file onto `config`. Unknown keys are rejected.
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

/// Effective config in the same TOML layout apply_config_file reads.
[[nodiscard]] std::string to_toml(const ExperimentConfig& config);

/// "a,b", "a:b" or "a..b".
[[nodiscard]] stats::LagWindow parse_fit_window(const std::string& text);
/// "a..b" or a single seed.
[[nodiscard]] SeedRange parse_seed_range(const std::string& text);

/// Lower-case hex SHA-256 of a file's bytes.
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

struct SimulateOutcome {
    StatsReport report;
    stats::RegimeContrast regimes;
    std::filesystem::path directory;
};

/// dynamics -> returns -> stats. Writes magnetization.csv, returns.csv,
/// returns.json, report.json, acf_returns.csv, acf_abs_returns.csv,
/// config.toml and snapshots/*.pgm into config.out.
SimulateOutcome cmd_simulate(const ExperimentConfig& config, std::ostream& log);

/// Runs every seed of config.seeds into config.out/seed-<n>, in parallel.
std::vector<SimulateOutcome> cmd_simulate_batch(const ExperimentConfig& config, std::ostream& log);

/// CSV -> log returns -> standardize -> report. Writes report.json, returns.csv,
/// returns.json and the ACF CSVs into config.out.
StatsReport cmd_analyze(const ExperimentConfig& config, std::ostream& log);

/// Writes comparison.json into out_dir and prints a side-by-side table.
Json cmd_compare(const std::filesystem::path& report_a, const std::filesystem::path& report_b,
                 const std::filesystem::path& out_dir, std::ostream& table);

/// PGM snapshots at config.snapshots. With an empty schedule, the run is
/// performed twice: once to locate the quietest and most volatile
/// regime_window-sweep windows and once to capture the lattice in the middle
/// of each. Returns the sweeps captured.
std::vector<long> cmd_snapshot(const ExperimentConfig& config, std::ostream& log);

/// Full command line. Returns the process exit code: 0 success, 1 IO/parse,
/// 2 configuration, 3 numerical or insufficient data.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinmarket::cli
