#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinmarket/lattice.hpp"
#include "spinmarket/rng.hpp"

namespace spinmarket {

/// All simulation knobs. One sweep is N = L*L single-site update attempts.
struct ModelParams {
    double beta = 1.7;
    double alpha = 10.0;
    double coupling = 1.0;
    int side = 32;
    long sweeps = 1'000'000;
    long warmup = 100'000;
    long delta_t = 100;
    std::uint64_t seed = 1;

    /// Throws Error{Configuration} describing the first violated constraint.
    void validate() const;

    [[nodiscard]] long recorded_length() const noexcept { return sweeps - warmup; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Local field h = J * (sum of the four neighbour spins) - alpha * S * |m|.
[[nodiscard]] double local_field(const SpinLattice& lattice, std::size_t index, double alpha,
                                 double coupling, double magnetization) noexcept;
[[nodiscard]] double local_field(const SpinLattice& lattice, Site site, double alpha,
                                 double coupling, double magnetization);

/// Probability that the next spin is +1: 1 / (1 + exp(-2 beta h)), evaluated
/// on the branch that cannot overflow.
[[nodiscard]] double update_probability(double field, double beta) noexcept;

/**
 * Heat-bath update rule bound to one parameter set.
 *
 * The field only takes finitely many values (neighbour sum, own spin, number
 * of up spins), so the +1 probabilities are tabulated up front for lattices
 * up to kMaxTabulatedSites. Each entry is produced by update_probability on
 * local_field's formula, so tabulated and direct evaluation agree bit for bit.
 */
class HeatBath {
public:
    static constexpr std::size_t kMaxTabulatedSites = std::size_t{1} << 18;

    HeatBath(double beta, double alpha, double coupling, std::size_t sites);
    explicit HeatBath(const ModelParams& params);

    /// One update attempt at a uniformly drawn site. Returns the site index.
    std::size_t step(SpinLattice& lattice, Rng& rng) const;

    /// Resamples the given site.
    void update_site(SpinLattice& lattice, std::size_t index, Rng& rng) const;

    /// N update attempts at random sites (with replacement).
    void sweep(SpinLattice& lattice, Rng& rng) const;

    [[nodiscard]] double probability_up(const SpinLattice& lattice, std::size_t index) const noexcept;

private:
    double beta_;
    double alpha_;
    double coupling_;
    std::size_t sites_;
    std::vector<double> table_;
};

/// Per-sweep magnetization after warm-up. values[k] is m after sweep warmup + k + 1.
struct MagnetizationSeries {
    std::vector<double> values;
    ModelParams params;
};

struct Snapshot {
    long sweep = 0;
    SpinLattice lattice;
};

struct SimulationResult {
    MagnetizationSeries series;
    std::vector<Snapshot> snapshots;
};

/**
 * Runs the full Monte Carlo loop: a Random lattice drawn from the seeded
 * stream, `sweeps` sweeps, first `warmup` magnetizations discarded.
 *
 * Snapshot indices count completed sweeps (0 is the initial lattice); indices
 * beyond `sweeps` are a configuration error.
 */
[[nodiscard]] SimulationResult run_simulation(const ModelParams& params,
                                              std::span<const long> snapshot_schedule = {});

/// CSV with header `sweep,m`, 17 significant digits.
void write_magnetization_csv(const MagnetizationSeries& series, const std::filesystem::path& path);

/// Plain PGM (P2): 0 for -1, 255 for +1. The header comment carries the sweep and params.
void export_snapshot(const SpinLattice& lattice, const std::filesystem::path& path,
                     long sweep = -1, const std::optional<ModelParams>& params = std::nullopt);

/// Reads a P2 file written by export_snapshot back into a lattice.
[[nodiscard]] SpinLattice read_snapshot(const std::filesystem::path& path);

}  // namespace spinmarket
