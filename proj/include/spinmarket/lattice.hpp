#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spinmarket/rng.hpp"

namespace spinmarket {

enum class InitMode { AllUp, AllDown, Random };

/// Row/column position on the lattice.
struct Site {
    int row = 0;
    int col = 0;

    friend bool operator==(const Site&, const Site&) = default;
};

/**
 * Square L x L grid of +1/-1 spins with periodic boundaries (a torus).
 *
 * Spins are stored row-major. The count of +1 spins is maintained on every
 * write, so the magnetization is available in constant time. Each site has
 * exactly four neighbours; for L = 2 the wrap makes each neighbour appear
 * twice.
 */
class SpinLattice {
public:
    /// Throws Error{InvalidDimension} when side < 2.
    SpinLattice(int side, InitMode init, std::uint64_t seed);
    /// Random initialization draws from the caller's stream.
    SpinLattice(int side, InitMode init, Rng& rng);

    /// Builds a lattice from explicit spins (row-major, each +1 or -1).
    static SpinLattice from_spins(int side, std::vector<std::int8_t> spins);

    [[nodiscard]] int side() const noexcept { return side_; }
    [[nodiscard]] std::size_t size() const noexcept { return spins_.size(); }
    [[nodiscard]] std::size_t up_count() const noexcept { return up_count_; }
    [[nodiscard]] std::span<const std::int8_t> spins() const noexcept { return spins_; }

    [[nodiscard]] std::int8_t spin(std::size_t index) const noexcept { return spins_[index]; }
    [[nodiscard]] std::int8_t spin(Site site) const;

    /// Writes a spin (+1 or -1) and keeps up_count in sync.
    void set_spin(std::size_t index, std::int8_t value) noexcept {
        if (spins_[index] != value) {
            up_count_ += value > 0 ? 1 : -1;
            spins_[index] = value;
        }
    }

    /// m = (2 up - N) / N.
    [[nodiscard]] double magnetization() const noexcept {
        const auto n = static_cast<double>(spins_.size());
        return (2.0 * static_cast<double>(up_count_) - n) / n;
    }

    /// Sum of all spins, 2 up - N.
    [[nodiscard]] long long spin_sum() const noexcept {
        return 2LL * static_cast<long long>(up_count_) - static_cast<long long>(spins_.size());
    }

    /// Up, down, left, right, with wrap-around. Throws Error{Index} when out of range.
    [[nodiscard]] std::array<Site, 4> neighbors(Site site) const;
    [[nodiscard]] const std::array<std::uint32_t, 4>& neighbor_indices(std::size_t index) const noexcept {
        return neighbors_[index];
    }

    [[nodiscard]] int neighbor_sum(std::size_t index) const noexcept {
        const auto& nb = neighbors_[index];
        return spins_[nb[0]] + spins_[nb[1]] + spins_[nb[2]] + spins_[nb[3]];
    }

    [[nodiscard]] std::size_t index_of(Site site) const;
    [[nodiscard]] Site site_of(std::size_t index) const;

    /// Full recount of +1 spins, independent of the cached counter.
    [[nodiscard]] std::size_t recount_up() const noexcept;

    friend bool operator==(const SpinLattice& a, const SpinLattice& b) {
        return a.side_ == b.side_ && a.spins_ == b.spins_;
    }

private:
    explicit SpinLattice(int side);
    void build_neighbors();
    void check(Site site) const;

    int side_;
    std::vector<std::int8_t> spins_;
    std::vector<std::array<std::uint32_t, 4>> neighbors_;
    std::size_t up_count_ = 0;
};

}  // namespace spinmarket
