#include <algorithm>
#include <cmath>
#include <string>

#include "spinmarket/error.hpp"
#include "spinmarket/stats.hpp"

namespace spinmarket::stats {

PowerLawFit power_law_fit(const AcfCurve& curve, LagWindow window) {
    if (window.min < 1 || window.min > window.max || window.max >= curve.rho.size()) {
        throw Error(ErrorKind::Range, "fit window [" + std::to_string(window.min) + "," +
                                          std::to_string(window.max) + "] not within lags 1.." +
                                          std::to_string(curve.rho.empty() ? 0 : curve.rho.size() - 1));
    }

    std::vector<double> xs;
    std::vector<double> ys;
    PowerLawFit fit;
    fit.window = window;
    for (std::size_t tau = window.min; tau <= window.max; ++tau) {
        const double rho = curve.rho[tau];
        if (rho > 0.0) {
            xs.push_back(std::log(static_cast<double>(tau)));
            ys.push_back(std::log(rho));
        } else {
            ++fit.n_dropped;
        }
    }
    fit.n_points = xs.size();
    if (fit.n_points < kMinPowerLawPoints) {
        throw Error(ErrorKind::InsufficientData,
                    "only " + std::to_string(fit.n_points) + " lags with positive autocorrelation in [" +
                        std::to_string(window.min) + "," + std::to_string(window.max) +
                        "]; need " + std::to_string(kMinPowerLawPoints));
    }

    const auto n = static_cast<double>(fit.n_points);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    fit.eta = -slope;
    fit.amplitude = std::exp(intercept);

    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ss_res += r * r;
    }
    // A perfectly flat log-ACF is fit exactly.
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

}  // namespace spinmarket::stats
