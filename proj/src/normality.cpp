#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "spinmarket/error.hpp"
#include "spinmarket/stats.hpp"

namespace spinmarket::stats {

TestResult jarque_bera(double n, double skew, double kurt) noexcept {
    const double excess = kurt - 3.0;
    const double jb = n / 6.0 * (skew * skew + excess * excess / 4.0);
    // Survival function of chi-squared with 2 degrees of freedom.
    return {jb, std::exp(-jb / 2.0)};
}

TestResult jarque_bera(std::span<const double> values) {
    if (values.size() < 10) throw Error(ErrorKind::InsufficientData, "Jarque-Bera needs at least 10 values");
    const auto m = central_moments(values);
    const double skew = m.m3 / std::pow(m.m2, 1.5);
    const double kurt = m.m4 / (m.m2 * m.m2);
    return jarque_bera(static_cast<double>(m.n), skew, kurt);
}

// Royston (1995), algorithm AS R94.
namespace {

template <std::size_t N>
double poly(const std::array<double, N>& c, double x) noexcept {
    double result = 0.0;
    for (std::size_t i = N; i-- > 0;) result = result * x + c[i];
    return result;
}

constexpr std::array<double, 6> kC1{0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
constexpr std::array<double, 6> kC2{0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
constexpr std::array<double, 4> kC3{0.544, -0.39978, 0.025054, -6.714e-4};
constexpr std::array<double, 4> kC4{1.3822, -0.77857, 0.062767, -0.0020322};
constexpr std::array<double, 4> kC5{-1.5861, -0.31082, -0.083751, 0.0038915};
constexpr std::array<double, 3> kC6{-0.4803, -0.082676, 0.0030302};
constexpr std::array<double, 2> kG{-2.273, 0.459};

// Half of the antisymmetric coefficient vector, largest first: the weight on
// x(n-1-i) is +a[i] and on x(i) is -a[i].
std::vector<double> sw_coefficients(std::size_t n) {
    const std::size_t half = n / 2;
    std::vector<double> a(half);
    if (n == 3) {
        a[0] = std::numbers::sqrt2 / 2.0;
        return a;
    }
    const boost::math::normal standard;
    const double an = static_cast<double>(n);
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        m[i] = boost::math::quantile(standard, (static_cast<double>(i + 1) - 0.375) / (an + 0.25));
        summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(kC1, rsn) - m[0] / ssumm2;

    std::size_t first_scaled = 1;
    double fac = 0.0;
    if (n > 5) {
        first_scaled = 2;
        const double a2 = -m[1] / ssumm2 + poly(kC2, rsn);
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                        (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
        a[1] = a2;
    } else {
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
    return a;
}

double sw_pvalue(double w, std::size_t n) {
    if (n == 3) {
        constexpr double six_over_pi = 6.0 / std::numbers::pi;
        constexpr double asin_sqrt_three_quarters = std::numbers::pi / 3.0;
        return std::clamp(six_over_pi * (std::asin(std::sqrt(w)) - asin_sqrt_three_quarters), 0.0, 1.0);
    }
    const double an = static_cast<double>(n);
    const double w1 = 1.0 - w;
    if (!(w1 > 0.0)) return 1.0;
    double y = std::log(w1);
    double mean = 0.0;
    double sd = 0.0;
    if (n <= 11) {
        const double gamma = poly(kG, an);
        if (y >= gamma) return 1e-99;
        y = -std::log(gamma - y);
        mean = poly(kC3, an);
        sd = std::exp(poly(kC4, an));
    } else {
        const double ln_n = std::log(an);
        mean = poly(kC5, ln_n);
        sd = std::exp(poly(kC6, ln_n));
    }
    return boost::math::cdf(boost::math::complement(boost::math::normal(mean, sd), y));
}

}  // namespace

TestResult shapiro_wilk(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 3 || n > kShapiroWilkMaxN) {
        throw Error(ErrorKind::Range, "Shapiro-Wilk requires 3 <= n <= " + std::to_string(kShapiroWilkMaxN) +
                                          ", got " + std::to_string(n) +
                                          "; subsample larger inputs with stride_subsample");
    }
    std::vector<double> x(values.begin(), values.end());
    std::sort(x.begin(), x.end());
    const double range = x.back() - x.front();
    if (!(range > 0.0)) throw Error(ErrorKind::DegenerateVariance, "Shapiro-Wilk on a constant sample");

    // Scale by the range as the reference algorithm does; W is scale-free.
    double mean = 0.0;
    for (double& v : x) {
        v /= range;
        mean += v;
    }
    mean /= static_cast<double>(n);

    const auto a = sw_coefficients(n);
    double numerator = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) numerator += a[i] * (x[n - 1 - i] - x[i]);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);

    const double w = std::min(1.0, numerator * numerator / ss);
    return {w, sw_pvalue(w, n)};
}

}  // namespace spinmarket::stats
