#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "spinmarket/cli.hpp"
#include "spinmarket/error.hpp"

namespace spinmarket::cli {

namespace {

[[noreturn]] void config_error(const std::string& message) { throw Error(ErrorKind::Configuration, message); }

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
    T value{};
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) config_error("invalid " + what + " '" + text + "'");
    return value;
}

std::pair<std::string, std::string> split_pair(const std::string& text) {
    for (const char* sep : {"..", ",", ":"}) {
        if (const auto pos = text.find(sep); pos != std::string::npos) {
            return {text.substr(0, pos), text.substr(pos + std::char_traits<char>::length(sep))};
        }
    }
    return {text, {}};
}

template <typename T>
T integer_value(const toml::node& node, const std::string& key) {
    const auto v = node.value<std::int64_t>();
    if (!v || !node.is_integer()) config_error("config key '" + key + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
        if (*v < 0) config_error("config key '" + key + "' must be non-negative");
    }
    return static_cast<T>(*v);
}

double float_value(const toml::node& node, const std::string& key) {
    const auto v = node.value<double>();
    if (!v) config_error("config key '" + key + "' must be a number");
    return *v;
}

std::string string_value(const toml::node& node, const std::string& key) {
    const auto v = node.value<std::string>();
    if (!v || !node.is_string()) config_error("config key '" + key + "' must be a string");
    return *v;
}

}  // namespace

void ExperimentConfig::validate_simulation() const {
    params.validate();
    if (params.recorded_length() < 2 * params.delta_t) {
        config_error("recorded sweeps (sweeps - warmup = " + std::to_string(params.recorded_length()) +
                     ") must be at least 2 * delta-t = " + std::to_string(2 * params.delta_t));
    }
    if (fit_window.min < 1 || fit_window.min > fit_window.max || fit_window.max > max_lag) {
        config_error("fit window must satisfy 1 <= min <= max <= max-lag");
    }
    for (long s : snapshots) {
        if (s < 0 || s > params.sweeps) config_error("snapshot sweep " + std::to_string(s) + " outside run");
    }
    if (regime_window < 2) config_error("regime window must be >= 2");
}

stats::LagWindow parse_fit_window(const std::string& text) {
    const auto [a, b] = split_pair(text);
    if (b.empty()) config_error("fit window '" + text + "' must look like 1,150");
    return {parse_number<std::size_t>(a, "fit window"), parse_number<std::size_t>(b, "fit window")};
}

SeedRange parse_seed_range(const std::string& text) {
    const auto [a, b] = split_pair(text);
    SeedRange range;
    range.first = parse_number<std::uint64_t>(a, "seed");
    range.last = b.empty() ? range.first : parse_number<std::uint64_t>(b, "seed");
    if (range.last < range.first) config_error("seed range '" + text + "' is decreasing");
    return range;
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
    std::ifstream probe(path);
    if (!probe) throw Error(ErrorKind::Io, "cannot open config file " + path.string());
    probe.close();

    toml::table table;
    try {
        table = toml::parse_file(path.string());
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << path.string() << ": " << e.description() << " at line " << e.source().begin.line;
        throw Error(ErrorKind::Parse, msg.str());
    }

    for (const auto& [key_view, node] : table) {
        const std::string key(key_view.str());
        auto& p = config.params;
        if (key == "beta") {
            p.beta = float_value(node, key);
        } else if (key == "alpha") {
            p.alpha = float_value(node, key);
        } else if (key == "coupling") {
            p.coupling = float_value(node, key);
        } else if (key == "size") {
            p.side = integer_value<int>(node, key);
        } else if (key == "sweeps") {
            p.sweeps = integer_value<long>(node, key);
        } else if (key == "warmup") {
            p.warmup = integer_value<long>(node, key);
        } else if (key == "delta_t") {
            p.delta_t = integer_value<long>(node, key);
        } else if (key == "seed") {
            p.seed = integer_value<std::uint64_t>(node, key);
        } else if (key == "mapping") {
            config.mapping = parse_mapping(string_value(node, key));
        } else if (key == "max_lag") {
            config.max_lag = integer_value<std::size_t>(node, key);
        } else if (key == "fit_window") {
            const auto* arr = node.as_array();
            if (!arr || arr->size() != 2) config_error("config key 'fit_window' must be a two-element array");
            config.fit_window = {integer_value<std::size_t>(*arr->get(0), key),
                                 integer_value<std::size_t>(*arr->get(1), key)};
        } else if (key == "out") {
            config.out = string_value(node, key);
        } else if (key == "snapshots") {
            const auto* arr = node.as_array();
            if (!arr) config_error("config key 'snapshots' must be an array of sweep indices");
            config.snapshots.clear();
            for (const auto& el : *arr) config.snapshots.push_back(integer_value<long>(el, key));
        } else if (key == "csv") {
            config.csv = string_value(node, key);
        } else if (key == "date_col") {
            config.columns.date = string_value(node, key);
        } else if (key == "price_col") {
            config.columns.price = string_value(node, key);
        } else if (key == "analyze_delta_t") {
            config.analyze_delta_t = integer_value<long>(node, key);
        } else if (key == "seeds") {
            config.seeds = parse_seed_range(string_value(node, key));
        } else if (key == "regime_window") {
            config.regime_window = integer_value<std::size_t>(node, key);
        } else {
            config_error(path.string() + ": unknown config key '" + key + "'");
        }
    }
}

std::string to_toml(const ExperimentConfig& config) {
    const auto& p = config.params;
    toml::table t;
    t.insert("beta", p.beta);
    t.insert("alpha", p.alpha);
    t.insert("coupling", p.coupling);
    t.insert("size", p.side);
    t.insert("sweeps", static_cast<std::int64_t>(p.sweeps));
    t.insert("warmup", static_cast<std::int64_t>(p.warmup));
    t.insert("delta_t", static_cast<std::int64_t>(p.delta_t));
    t.insert("seed", static_cast<std::int64_t>(p.seed));
    t.insert("mapping", to_string(config.mapping));
    t.insert("max_lag", static_cast<std::int64_t>(config.max_lag));
    t.insert("fit_window", toml::array{static_cast<std::int64_t>(config.fit_window.min),
                                       static_cast<std::int64_t>(config.fit_window.max)});
    toml::array snaps;
    for (long s : config.snapshots) snaps.push_back(static_cast<std::int64_t>(s));
    t.insert("snapshots", std::move(snaps));
    t.insert("regime_window", static_cast<std::int64_t>(config.regime_window));
    std::ostringstream out;
    out << toml::toml_formatter{t} << '\n';
    return out.str();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::Io, "SHA-256 unavailable");
    }
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        if (const auto got = in.gcount(); got > 0) {
            EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(got));
        }
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);

    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[digest[i] >> 4];
        hex += kHex[digest[i] & 0xF];
    }
    return hex;
}

}  // namespace spinmarket::cli
