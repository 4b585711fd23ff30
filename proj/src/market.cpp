#include "spinmarket/market.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "spinmarket/error.hpp"
#include "spinmarket/format.hpp"

namespace spinmarket {

const char* to_string(Mapping mapping) noexcept {
    return mapping == Mapping::MDiff ? "m-diff" : "log-abs-m";
}

const char* to_string(ReturnSource source) noexcept {
    return source == ReturnSource::Simulated ? "simulated" : "empirical";
}

Mapping parse_mapping(const std::string& name) {
    if (name == "m-diff") return Mapping::MDiff;
    if (name == "log-abs-m") return Mapping::LogAbsM;
    throw Error(ErrorKind::Configuration, "unknown mapping '" + name + "' (expected m-diff or log-abs-m)");
}

std::vector<double> magnetization_differences(std::span<const double> magnetization, long delta_t,
                                              Mapping mapping) {
    if (delta_t < 1) throw Error(ErrorKind::Configuration, "delta-t must be >= 1");
    const auto step = static_cast<std::size_t>(delta_t);
    if (magnetization.size() < 2 * step) {
        throw Error(ErrorKind::InsufficientData,
                    "magnetization series of length " + std::to_string(magnetization.size()) +
                        " is shorter than 2 * delta-t = " + std::to_string(2 * step));
    }
    const auto level = [mapping](double m) {
        return mapping == Mapping::MDiff ? m : std::log(std::max(std::fabs(m), kLogAbsFloor));
    };
    const std::size_t count = (magnetization.size() - 1) / step;
    std::vector<double> out(count);
    for (std::size_t k = 1; k <= count; ++k) {
        out[k - 1] = level(magnetization[k * step]) - level(magnetization[(k - 1) * step]);
    }
    return out;
}

ReturnSeries magnetization_to_returns(const MagnetizationSeries& series, long delta_t, Mapping mapping) {
    ReturnSeries out;
    out.values = standardize(magnetization_differences(series.values, delta_t, mapping));
    out.delta_t = delta_t;
    out.source = ReturnSource::Simulated;
    out.standardized = true;
    out.mapping = mapping;
    return out;
}

std::vector<double> standardize(std::span<const double> values) {
    if (values.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "standardization needs at least 2 values");
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) throw Error(ErrorKind::DegenerateVariance, "cannot standardize: all values identical");

    const auto n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / n);
    if (!(sd > 0.0) || !std::isfinite(sd)) {
        throw Error(ErrorKind::DegenerateVariance, "cannot standardize: zero or non-finite spread");
    }

    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [&](double v) { return (v - mean) / sd; });
    return out;
}

void write_returns_csv(const ReturnSeries& returns, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out << "index,return\n";
    for (std::size_t i = 0; i < returns.values.size(); ++i) {
        out << i << ',' << format_double(returns.values[i]) << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

void write_returns_sidecar(const ReturnSeries& returns, const std::filesystem::path& path,
                           std::optional<std::uint64_t> seed) {
    nlohmann::ordered_json j;
    j["delta_t"] = returns.delta_t;
    j["source"] = to_string(returns.source);
    j["mapping"] = returns.mapping ? nlohmann::ordered_json(to_string(*returns.mapping)) : nlohmann::ordered_json(nullptr);
    j["standardized"] = returns.standardized;
    j["n"] = returns.values.size();
    j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
    j["rng"] = seed ? nlohmann::ordered_json(Rng::kName) : nlohmann::ordered_json(nullptr);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace spinmarket
