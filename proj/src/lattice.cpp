#include "spinmarket/lattice.hpp"

#include <algorithm>
#include <string>

#include "spinmarket/error.hpp"

namespace spinmarket {

namespace {

constexpr int kMaxSide = 1 << 15;

void check_side(int side) {
    if (side < 2 || side > kMaxSide) {
        throw Error(ErrorKind::InvalidDimension,
                    "lattice side must be in [2, " + std::to_string(kMaxSide) + "], got " +
                        std::to_string(side));
    }
}

}  // namespace

SpinLattice::SpinLattice(int side) : side_(side) {
    check_side(side);
    const auto n = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
    spins_.assign(n, 1);
    build_neighbors();
}

SpinLattice::SpinLattice(int side, InitMode init, std::uint64_t seed) : SpinLattice(side) {
    Rng rng(seed);
    *this = SpinLattice(side, init, rng);
}

SpinLattice::SpinLattice(int side, InitMode init, Rng& rng) : SpinLattice(side) {
    switch (init) {
        case InitMode::AllUp:
            std::fill(spins_.begin(), spins_.end(), std::int8_t{1});
            break;
        case InitMode::AllDown:
            std::fill(spins_.begin(), spins_.end(), std::int8_t{-1});
            break;
        case InitMode::Random:
            for (auto& s : spins_) s = rng.coin() ? std::int8_t{1} : std::int8_t{-1};
            break;
    }
    up_count_ = recount_up();
}

SpinLattice SpinLattice::from_spins(int side, std::vector<std::int8_t> spins) {
    SpinLattice lattice(side);
    if (spins.size() != lattice.size()) {
        throw Error(ErrorKind::InvalidDimension,
                    "expected " + std::to_string(lattice.size()) + " spins, got " +
                        std::to_string(spins.size()));
    }
    for (std::size_t i = 0; i < spins.size(); ++i) {
        if (spins[i] != 1 && spins[i] != -1) {
            throw Error(ErrorKind::Domain, "spin " + std::to_string(i) + " is neither +1 nor -1");
        }
    }
    lattice.spins_ = std::move(spins);
    lattice.up_count_ = lattice.recount_up();
    return lattice;
}

void SpinLattice::build_neighbors() {
    const int L = side_;
    neighbors_.resize(spins_.size());
    for (int r = 0; r < L; ++r) {
        for (int c = 0; c < L; ++c) {
            const auto at = [L](int row, int col) { return static_cast<std::uint32_t>(row * L + col); };
            neighbors_[at(r, c)] = {at((r + L - 1) % L, c), at((r + 1) % L, c),
                                    at(r, (c + L - 1) % L), at(r, (c + 1) % L)};
        }
    }
}

void SpinLattice::check(Site site) const {
    if (site.row < 0 || site.row >= side_ || site.col < 0 || site.col >= side_) {
        throw Error(ErrorKind::Index, "site (" + std::to_string(site.row) + "," +
                                          std::to_string(site.col) + ") outside " +
                                          std::to_string(side_) + "x" + std::to_string(side_) +
                                          " lattice");
    }
}

std::int8_t SpinLattice::spin(Site site) const { return spins_[index_of(site)]; }

std::size_t SpinLattice::index_of(Site site) const {
    check(site);
    return static_cast<std::size_t>(site.row) * static_cast<std::size_t>(side_) +
           static_cast<std::size_t>(site.col);
}

Site SpinLattice::site_of(std::size_t index) const {
    if (index >= spins_.size()) {
        throw Error(ErrorKind::Index, "flat index " + std::to_string(index) + " outside lattice of " +
                                          std::to_string(spins_.size()) + " sites");
    }
    const auto L = static_cast<std::size_t>(side_);
    return Site{static_cast<int>(index / L), static_cast<int>(index % L)};
}

std::array<Site, 4> SpinLattice::neighbors(Site site) const {
    const auto& nb = neighbors_[index_of(site)];
    return {site_of(nb[0]), site_of(nb[1]), site_of(nb[2]), site_of(nb[3])};
}

std::size_t SpinLattice::recount_up() const noexcept {
    return static_cast<std::size_t>(std::count(spins_.begin(), spins_.end(), std::int8_t{1}));
}

}  // namespace spinmarket
