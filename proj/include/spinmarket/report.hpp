#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "spinmarket/market.hpp"
#include "spinmarket/stats.hpp"

namespace spinmarket {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

struct ReportOptions {
    std::size_t max_lag = 150;
    stats::LagWindow fit_window{1, 150};
    std::size_t sw_max_n = stats::kShapiroWilkMaxN;
};

struct StatsReport {
    std::size_t n = 0;
    double skewness = 0.0;
    double kurtosis_raw = 0.0;
    double kurtosis_excess = 0.0;
    stats::TestResult jarque_bera;
    stats::TestResult shapiro_wilk;
    std::size_t sw_n = 0;       // sample size the SW test actually saw
    std::size_t sw_stride = 1;  // 1 unless the input was subsampled
    stats::AcfCurve acf_returns;
    stats::AcfCurve acf_abs_returns;
    stats::PowerLawFit powerlaw;
    Json provenance = Json::object();
};

/// Moments, both normality tests, the ACF of returns and of |returns|, and the
/// power-law fit of the latter.
[[nodiscard]] StatsReport build_report(const ReturnSeries& returns, const ReportOptions& options = {});

[[nodiscard]] Json to_json(const StatsReport& report);
/// Throws Error{Version} on a schema mismatch and Error{Schema} on missing fields.
[[nodiscard]] StatsReport report_from_json(const Json& j);

void write_report(const StatsReport& report, const std::filesystem::path& path);
[[nodiscard]] StatsReport read_report(const std::filesystem::path& path);

/// `lag,rho` CSV.
void write_acf_csv(const stats::AcfCurve& curve, const std::filesystem::path& path);

}  // namespace spinmarket
