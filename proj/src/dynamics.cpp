#include "spinmarket/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "spinmarket/error.hpp"
#include "spinmarket/format.hpp"

namespace spinmarket {

namespace {

// Single definition of the field so tabulated and direct paths round identically.
inline double field_value(int neighbor_sum, int spin, double magnetization, double alpha,
                          double coupling) noexcept {
    return coupling * static_cast<double>(neighbor_sum) -
           alpha * static_cast<double>(spin) * std::fabs(magnetization);
}

inline std::size_t table_slot(int neighbor_sum, int spin, std::size_t up, std::size_t sites) noexcept {
    const auto sum_slot = static_cast<std::size_t>((neighbor_sum + 4) / 2);
    const std::size_t spin_slot = spin > 0 ? 1 : 0;
    return (sum_slot * 2 + spin_slot) * (sites + 1) + up;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw Error(ErrorKind::Configuration, message);
}

}  // namespace

void ModelParams::validate() const {
    require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
    require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be finite and >= 0");
    require(std::isfinite(coupling), "coupling must be finite");
    require(side >= 2, "lattice size must be >= 2, got " + std::to_string(side));
    require(warmup >= 0, "warmup must be >= 0");
    require(sweeps > warmup, "sweeps (" + std::to_string(sweeps) + ") must exceed warmup (" +
                                 std::to_string(warmup) + ")");
    require(delta_t >= 1, "delta-t must be >= 1");
}

double local_field(const SpinLattice& lattice, std::size_t index, double alpha, double coupling,
                   double magnetization) noexcept {
    return field_value(lattice.neighbor_sum(index), lattice.spin(index), magnetization, alpha, coupling);
}

double local_field(const SpinLattice& lattice, Site site, double alpha, double coupling,
                   double magnetization) {
    return local_field(lattice, lattice.index_of(site), alpha, coupling, magnetization);
}

double update_probability(double field, double beta) noexcept {
    // Evaluate the smaller tail first; the larger one is its exact complement,
    // which makes p(h) + p(-h) == 1 hold in floating point.
    const double x = 2.0 * beta * field;
    const double e = std::exp(-std::fabs(x));
    const double small = e / (1.0 + e);
    return x >= 0.0 ? 1.0 - small : small;
}

HeatBath::HeatBath(double beta, double alpha, double coupling, std::size_t sites)
    : beta_(beta), alpha_(alpha), coupling_(coupling), sites_(sites) {
    if (sites_ > kMaxTabulatedSites) return;
    table_.resize(10 * (sites_ + 1));
    const auto n = static_cast<double>(sites_);
    for (int sum = -4; sum <= 4; sum += 2) {
        for (int spin : {-1, 1}) {
            for (std::size_t up = 0; up <= sites_; ++up) {
                const double m = (2.0 * static_cast<double>(up) - n) / n;
                table_[table_slot(sum, spin, up, sites_)] =
                    update_probability(field_value(sum, spin, m, alpha_, coupling_), beta_);
            }
        }
    }
}

HeatBath::HeatBath(const ModelParams& params)
    : HeatBath(params.beta, params.alpha, params.coupling,
               static_cast<std::size_t>(params.side) * static_cast<std::size_t>(params.side)) {}

double HeatBath::probability_up(const SpinLattice& lattice, std::size_t index) const noexcept {
    const int sum = lattice.neighbor_sum(index);
    const int spin = lattice.spin(index);
    if (!table_.empty()) return table_[table_slot(sum, spin, lattice.up_count(), sites_)];
    return update_probability(field_value(sum, spin, lattice.magnetization(), alpha_, coupling_), beta_);
}

void HeatBath::update_site(SpinLattice& lattice, std::size_t index, Rng& rng) const {
    const double p = probability_up(lattice, index);
    lattice.set_spin(index, rng.uniform() < p ? std::int8_t{1} : std::int8_t{-1});
}

std::size_t HeatBath::step(SpinLattice& lattice, Rng& rng) const {
    const std::size_t index = rng.index(lattice.size());
    update_site(lattice, index, rng);
    return index;
}

void HeatBath::sweep(SpinLattice& lattice, Rng& rng) const {
    const std::size_t n = lattice.size();
    for (std::size_t k = 0; k < n; ++k) step(lattice, rng);
}

SimulationResult run_simulation(const ModelParams& params, std::span<const long> snapshot_schedule) {
    params.validate();
    std::vector<long> schedule(snapshot_schedule.begin(), snapshot_schedule.end());
    std::sort(schedule.begin(), schedule.end());
    schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());
    for (long s : schedule) {
        require(s >= 0 && s <= params.sweeps,
                "snapshot sweep " + std::to_string(s) + " outside [0, " + std::to_string(params.sweeps) + "]");
    }

    Rng rng(params.seed);
    SpinLattice lattice(params.side, InitMode::Random, rng);
    const HeatBath dynamics(params);

    SimulationResult result;
    result.series.params = params;
    result.series.values.reserve(static_cast<std::size_t>(params.recorded_length()));

    auto next_snapshot = schedule.begin();
    if (next_snapshot != schedule.end() && *next_snapshot == 0) {
        result.snapshots.push_back({0, lattice});
        ++next_snapshot;
    }
    for (long t = 1; t <= params.sweeps; ++t) {
        dynamics.sweep(lattice, rng);
        if (t > params.warmup) result.series.values.push_back(lattice.magnetization());
        if (next_snapshot != schedule.end() && *next_snapshot == t) {
            result.snapshots.push_back({t, lattice});
            ++next_snapshot;
        }
    }
    return result;
}

void write_magnetization_csv(const MagnetizationSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out << "sweep,m\n";
    const long first = series.params.warmup + 1;
    for (std::size_t k = 0; k < series.values.size(); ++k) {
        out << first + static_cast<long>(k) << ',' << format_double(series.values[k]) << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace spinmarket
