#include <algorithm>
#include <cmath>
#include <string>

#include "spinmarket/error.hpp"
#include "spinmarket/stats.hpp"

namespace spinmarket::stats {

CentralMoments central_moments(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorKind::InsufficientData, "moments of an empty sample");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) throw Error(ErrorKind::DegenerateVariance, "sample has zero variance");

    CentralMoments m;
    m.n = values.size();
    const auto n = static_cast<double>(m.n);
    for (double v : values) m.mean += v;
    m.mean /= n;
    for (double v : values) {
        const double d = v - m.mean;
        const double d2 = d * d;
        m.m2 += d2;
        m.m3 += d2 * d;
        m.m4 += d2 * d2;
    }
    m.m2 /= n;
    m.m3 /= n;
    m.m4 /= n;
    if (!(m.m2 > 0.0) || !std::isfinite(m.m4)) {
        throw Error(ErrorKind::DegenerateVariance, "sample variance is zero or non-finite");
    }
    return m;
}

double skewness(std::span<const double> values) {
    if (values.size() < 3) throw Error(ErrorKind::InsufficientData, "skewness needs at least 3 values");
    const auto m = central_moments(values);
    return m.m3 / std::pow(m.m2, 1.5);
}

double kurtosis(std::span<const double> values) {
    if (values.size() < 4) throw Error(ErrorKind::InsufficientData, "kurtosis needs at least 4 values");
    const auto m = central_moments(values);
    return m.m4 / (m.m2 * m.m2);
}

}  // namespace spinmarket::stats
