#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spinmarket/market.hpp"

namespace spinmarket::stats {

// ---------------------------------------------------------------------------
// Returns

/// r(t) = ln P(t) - ln P(t - delta_t) for t = delta_t .. len-1.
/// Throws Error{Domain} naming the first non-positive price.
[[nodiscard]] ReturnSeries log_returns(std::span<const double> prices, long delta_t = 1);

// ---------------------------------------------------------------------------
// Moments

struct CentralMoments {
    double mean = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    std::size_t n = 0;
};

/// Mean and central moments with the 1/n convention. Throws
/// Error{DegenerateVariance} if every value is identical.
[[nodiscard]] CentralMoments central_moments(std::span<const double> values);

/// m3 / m2^(3/2); needs at least 3 values.
[[nodiscard]] double skewness(std::span<const double> values);
/// m4 / m2^2, normal = 3 (not excess); needs at least 4 values.
[[nodiscard]] double kurtosis(std::span<const double> values);

// ---------------------------------------------------------------------------
// Autocorrelation

struct AcfCurve {
    std::vector<std::size_t> lags;
    std::vector<double> rho;
    std::size_t n = 0;
};

/// Biased estimator with the full-sample mean and full-sample denominator,
/// lags 0..max_lag. rho[0] is exactly 1.
[[nodiscard]] AcfCurve acf(std::span<const double> values, std::size_t max_lag);

// ---------------------------------------------------------------------------
// Power-law decay

struct LagWindow {
    std::size_t min = 1;
    std::size_t max = 150;

    friend bool operator==(const LagWindow&, const LagWindow&) = default;
};

struct PowerLawFit {
    double amplitude = 0.0;  // A
    double eta = 0.0;        // decay exponent
    LagWindow window;
    double r_squared = 0.0;
    std::size_t n_points = 0;   // lags used (rho > 0)
    std::size_t n_dropped = 0;  // lags in the window with rho <= 0
};

inline constexpr std::size_t kMinPowerLawPoints = 5;

/// Least squares of ln rho on ln tau over the window, rho > 0 only:
/// rho(tau) ~ A * tau^(-eta).
[[nodiscard]] PowerLawFit power_law_fit(const AcfCurve& curve, LagWindow window);

// ---------------------------------------------------------------------------
// Normality tests

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// JB = n/6 (S^2 + (K-3)^2/4), p = exp(-JB/2).
[[nodiscard]] TestResult jarque_bera(double n, double skew, double kurt) noexcept;
/// Needs at least 10 values.
[[nodiscard]] TestResult jarque_bera(std::span<const double> values);

inline constexpr std::size_t kShapiroWilkMaxN = 5000;

/// Shapiro-Wilk W and p-value using Royston's approximation (algorithm AS R94).
/// Valid for 3 <= n <= 5000; outside that range throws Error{Range}. Larger
/// samples should go through stride_subsample first.
[[nodiscard]] TestResult shapiro_wilk(std::span<const double> values);

/// Every k-th value starting at 0, with k = ceil(n / max_n), so at most max_n survive.
[[nodiscard]] std::vector<double> stride_subsample(std::span<const double> values, std::size_t max_n);

// ---------------------------------------------------------------------------
// Regimes

/// Population standard deviation of each complete, non-overlapping window.
[[nodiscard]] std::vector<double> window_volatility(std::span<const double> values, std::size_t window);

struct RegimeContrast {
    double quietest = 0.0;
    double most_volatile = 0.0;
    std::size_t quietest_window = 0;
    std::size_t volatile_window = 0;

    [[nodiscard]] double ratio() const noexcept { return most_volatile / quietest; }
};

/// Extremes of window_volatility. Throws Error{InsufficientData} without two complete windows.
[[nodiscard]] RegimeContrast regime_contrast(std::span<const double> values, std::size_t window);

}  // namespace spinmarket::stats
