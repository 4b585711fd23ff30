#include <algorithm>
#include <cmath>
#include <string>

#include "spinmarket/error.hpp"
#include "spinmarket/stats.hpp"

namespace spinmarket::stats {

ReturnSeries log_returns(std::span<const double> prices, long delta_t) {
    if (delta_t < 1) throw Error(ErrorKind::Configuration, "delta-t must be >= 1");
    const auto step = static_cast<std::size_t>(delta_t);
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0) || !std::isfinite(prices[i])) {
            throw Error(ErrorKind::Domain, "price at index " + std::to_string(i) + " is not positive");
        }
    }
    if (prices.size() <= step) {
        throw Error(ErrorKind::InsufficientData, "need more than delta-t = " + std::to_string(step) +
                                                     " prices, got " + std::to_string(prices.size()));
    }

    ReturnSeries out;
    out.delta_t = delta_t;
    out.source = ReturnSource::Empirical;
    out.values.reserve(prices.size() - step);
    for (std::size_t t = step; t < prices.size(); ++t) {
        out.values.push_back(std::log(prices[t]) - std::log(prices[t - step]));
    }
    return out;
}

std::vector<double> window_volatility(std::span<const double> values, std::size_t window) {
    if (window < 2) throw Error(ErrorKind::Configuration, "volatility window must be >= 2");
    std::vector<double> out;
    for (std::size_t start = 0; start + window <= values.size(); start += window) {
        const auto block = values.subspan(start, window);
        double mean = 0.0;
        for (double v : block) mean += v;
        mean /= static_cast<double>(window);
        double ss = 0.0;
        for (double v : block) ss += (v - mean) * (v - mean);
        out.push_back(std::sqrt(ss / static_cast<double>(window)));
    }
    return out;
}

RegimeContrast regime_contrast(std::span<const double> values, std::size_t window) {
    const auto vols = window_volatility(values, window);
    if (vols.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "regime contrast needs at least two complete windows");
    }
    const auto [lo, hi] = std::minmax_element(vols.begin(), vols.end());
    RegimeContrast rc;
    rc.quietest = *lo;
    rc.most_volatile = *hi;
    rc.quietest_window = static_cast<std::size_t>(lo - vols.begin());
    rc.volatile_window = static_cast<std::size_t>(hi - vols.begin());
    return rc;
}

std::vector<double> stride_subsample(std::span<const double> values, std::size_t max_n) {
    if (max_n == 0) throw Error(ErrorKind::Configuration, "subsample size must be positive");
    const std::size_t stride = std::max<std::size_t>(1, (values.size() + max_n - 1) / max_n);
    std::vector<double> out;
    out.reserve(values.size() / stride + 1);
    for (std::size_t i = 0; i < values.size(); i += stride) out.push_back(values[i]);
    return out;
}

}  // namespace spinmarket::stats
