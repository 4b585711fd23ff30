#include "spinmarket/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "spinmarket/error.hpp"
#include "spinmarket/format.hpp"

namespace spinmarket {

namespace {

Json acf_to_json(const stats::AcfCurve& curve) {
    Json j;
    j["n"] = curve.n;
    j["lags"] = curve.lags;
    j["rho"] = curve.rho;
    return j;
}

stats::AcfCurve acf_from_json(const Json& j) {
    stats::AcfCurve curve;
    curve.n = j.at("n").get<std::size_t>();
    curve.lags = j.at("lags").get<std::vector<std::size_t>>();
    curve.rho = j.at("rho").get<std::vector<double>>();
    if (curve.lags.size() != curve.rho.size()) {
        throw Error(ErrorKind::Schema, "ACF lags and rho differ in length");
    }
    return curve;
}

// A successful test can still produce a p-value that JSON cannot hold (NaN);
// write null so the file stays valid.
Json number_or_null(double v) {
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

double number_from(const Json& j, const char* key) {
    const auto& v = j.at(key);
    return v.is_null() ? std::nan("") : v.get<double>();
}

}  // namespace

StatsReport build_report(const ReturnSeries& returns, const ReportOptions& options) {
    const std::span<const double> x(returns.values);
    StatsReport report;
    report.n = x.size();

    try {
        const auto m = stats::central_moments(x);
        if (m.n < 10) throw Error(ErrorKind::InsufficientData, "report needs at least 10 returns");
        report.skewness = m.m3 / std::pow(m.m2, 1.5);
        report.kurtosis_raw = m.m4 / (m.m2 * m.m2);
        report.kurtosis_excess = report.kurtosis_raw - 3.0;
        report.jarque_bera = stats::jarque_bera(static_cast<double>(m.n), report.skewness, report.kurtosis_raw);

        if (x.size() > options.sw_max_n) {
            const auto sub = stats::stride_subsample(x, options.sw_max_n);
            report.sw_stride = (x.size() + options.sw_max_n - 1) / options.sw_max_n;
            report.sw_n = sub.size();
            report.shapiro_wilk = stats::shapiro_wilk(sub);
        } else {
            report.sw_n = x.size();
            report.shapiro_wilk = stats::shapiro_wilk(x);
        }

        report.acf_returns = stats::acf(x, options.max_lag);
        std::vector<double> absolute(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) absolute[i] = std::fabs(x[i]);
        report.acf_abs_returns = stats::acf(absolute, options.max_lag);
        report.powerlaw = stats::power_law_fit(report.acf_abs_returns, options.fit_window);
    } catch (const Error& e) {
        throw Error(e.kind(), std::string("building stats report: ") + e.what());
    }
    return report;
}

Json to_json(const StatsReport& r) {
    Json j;
    j["schema_version"] = kReportSchemaVersion;
    j["n"] = r.n;
    j["skewness"] = r.skewness;
    j["kurtosis_raw"] = r.kurtosis_raw;
    j["kurtosis_excess"] = r.kurtosis_excess;
    j["jb_stat"] = r.jarque_bera.statistic;
    j["jb_pvalue"] = number_or_null(r.jarque_bera.p_value);
    j["sw_stat"] = r.shapiro_wilk.statistic;
    j["sw_pvalue"] = number_or_null(r.shapiro_wilk.p_value);
    j["sw_subsample"] = {{"method", "stride"}, {"stride", r.sw_stride}, {"n_used", r.sw_n}};
    j["powerlaw"] = {{"A", r.powerlaw.amplitude},
                     {"eta", r.powerlaw.eta},
                     {"r2", r.powerlaw.r_squared},
                     {"window", {r.powerlaw.window.min, r.powerlaw.window.max}},
                     {"n_points", r.powerlaw.n_points},
                     {"n_dropped", r.powerlaw.n_dropped}};
    j["acf_returns"] = acf_to_json(r.acf_returns);
    j["acf_abs_returns"] = acf_to_json(r.acf_abs_returns);
    j["provenance"] = r.provenance;
    return j;
}

StatsReport report_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Schema, "report must be a JSON object");
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
        throw Error(ErrorKind::Version, "report has no schema_version");
    }
    if (const int v = j["schema_version"].get<int>(); v != kReportSchemaVersion) {
        throw Error(ErrorKind::Version, "report schema_version " + std::to_string(v) + " unsupported (expected " +
                                            std::to_string(kReportSchemaVersion) + ")");
    }
    try {
        StatsReport r;
        r.n = j.at("n").get<std::size_t>();
        r.skewness = j.at("skewness").get<double>();
        r.kurtosis_raw = j.at("kurtosis_raw").get<double>();
        r.kurtosis_excess = j.at("kurtosis_excess").get<double>();
        r.jarque_bera = {j.at("jb_stat").get<double>(), number_from(j, "jb_pvalue")};
        r.shapiro_wilk = {j.at("sw_stat").get<double>(), number_from(j, "sw_pvalue")};
        if (j.contains("sw_subsample")) {
            r.sw_stride = j["sw_subsample"].at("stride").get<std::size_t>();
            r.sw_n = j["sw_subsample"].at("n_used").get<std::size_t>();
        }
        const auto& pl = j.at("powerlaw");
        r.powerlaw.amplitude = pl.at("A").get<double>();
        r.powerlaw.eta = pl.at("eta").get<double>();
        r.powerlaw.r_squared = pl.at("r2").get<double>();
        const auto window = pl.at("window").get<std::vector<std::size_t>>();
        if (window.size() != 2) throw Error(ErrorKind::Schema, "powerlaw.window must have two entries");
        r.powerlaw.window = {window[0], window[1]};
        r.powerlaw.n_points = pl.at("n_points").get<std::size_t>();
        r.powerlaw.n_dropped = pl.value("n_dropped", std::size_t{0});
        r.acf_returns = acf_from_json(j.at("acf_returns"));
        r.acf_abs_returns = acf_from_json(j.at("acf_abs_returns"));
        r.provenance = j.value("provenance", Json::object());
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Schema, std::string("malformed report: ") + e.what());
    }
}

void write_report(const StatsReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out << to_json(report).dump(2) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

StatsReport read_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
    return report_from_json(j);
}

void write_acf_csv(const stats::AcfCurve& curve, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out << "lag,rho\n";
    for (std::size_t i = 0; i < curve.rho.size(); ++i) {
        out << curve.lags[i] << ',' << format_double(curve.rho[i]) << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace spinmarket
