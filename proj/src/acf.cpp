#include <algorithm>
#include <string>

#include "spinmarket/error.hpp"
#include "spinmarket/stats.hpp"

namespace spinmarket::stats {

AcfCurve acf(std::span<const double> values, std::size_t max_lag) {
    const std::size_t n = values.size();
    if (n <= max_lag) {
        throw Error(ErrorKind::InsufficientData, "ACF up to lag " + std::to_string(max_lag) +
                                                     " needs more than " + std::to_string(max_lag) +
                                                     " values, got " + std::to_string(n));
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) throw Error(ErrorKind::DegenerateVariance, "ACF of a constant series");

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> centered(n);
    std::transform(values.begin(), values.end(), centered.begin(), [mean](double v) { return v - mean; });

    double denom = 0.0;
    for (double d : centered) denom += d * d;
    if (!(denom > 0.0)) throw Error(ErrorKind::DegenerateVariance, "ACF of a zero-variance series");

    AcfCurve curve;
    curve.n = n;
    curve.lags.resize(max_lag + 1);
    curve.rho.resize(max_lag + 1);
    curve.lags[0] = 0;
    curve.rho[0] = 1.0;
    for (std::size_t tau = 1; tau <= max_lag; ++tau) {
        double num = 0.0;
        for (std::size_t t = 0; t + tau < n; ++t) num += centered[t] * centered[t + tau];
        curve.lags[tau] = tau;
        curve.rho[tau] = num / denom;
    }
    return curve;
}

}  // namespace spinmarket::stats
