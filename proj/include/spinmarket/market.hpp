#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinmarket/dynamics.hpp"

namespace spinmarket {

enum class ReturnSource { Simulated, Empirical };

/// How a magnetization trajectory becomes a return.
enum class Mapping {
    MDiff,     // m(t) - m(t - dt)
    LogAbsM,   // ln|m(t)| - ln|m(t - dt)|, |m| floored at kLogAbsFloor
};

inline constexpr double kLogAbsFloor = 1e-6;

const char* to_string(Mapping mapping) noexcept;
const char* to_string(ReturnSource source) noexcept;
/// Accepts "m-diff" or "log-abs-m"; throws Error{Configuration} otherwise.
Mapping parse_mapping(const std::string& name);

struct ReturnSeries {
    std::vector<double> values;
    long delta_t = 1;
    ReturnSource source = ReturnSource::Simulated;
    bool standardized = false;
    std::optional<Mapping> mapping;
};

/// Raw differences sampled every delta_t: floor((len - 1) / delta_t) values.
/// Throws Error{InsufficientData} when len < 2 * delta_t.
[[nodiscard]] std::vector<double> magnetization_differences(std::span<const double> magnetization,
                                                            long delta_t,
                                                            Mapping mapping = Mapping::MDiff);

/// Differences followed by standardization.
[[nodiscard]] ReturnSeries magnetization_to_returns(const MagnetizationSeries& series, long delta_t,
                                                    Mapping mapping = Mapping::MDiff);

/// (x - mean) / stddev with the population (1/n) deviation.
/// Throws Error{InsufficientData} below two values, Error{DegenerateVariance} on zero spread.
[[nodiscard]] std::vector<double> standardize(std::span<const double> values);

/// CSV with header `index,return`.
void write_returns_csv(const ReturnSeries& returns, const std::filesystem::path& path);

/// JSON sidecar with delta_t, source, mapping and seed.
void write_returns_sidecar(const ReturnSeries& returns, const std::filesystem::path& path,
                           std::optional<std::uint64_t> seed);

}  // namespace spinmarket
