#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

#include "spinmarket/dynamics.hpp"
#include "spinmarket/error.hpp"
#include "spinmarket/format.hpp"

namespace spinmarket {

namespace {

constexpr int kUpLevel = 255;
constexpr int kDownLevel = 0;

// Next whitespace-delimited token, skipping '#' comments to end of line.
bool next_token(std::istream& in, std::string& token) {
    token.clear();
    char c;
    while (in.get(c)) {
        if (c == '#') {
            std::string rest;
            std::getline(in, rest);
            if (!token.empty()) return true;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!token.empty()) return true;
            continue;
        }
        token.push_back(c);
    }
    return !token.empty();
}

int parse_int(const std::string& token, const std::filesystem::path& path) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(token, &used);
        if (used == token.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::Parse, path.string() + ": expected integer, got '" + token + "'");
}

}  // namespace

void export_snapshot(const SpinLattice& lattice, const std::filesystem::path& path, long sweep,
                     const std::optional<ModelParams>& params) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");

    out << "P2\n";
    out << "# sweep=" << sweep << '\n';
    if (params) {
        out << "# L=" << params->side << " beta=" << format_double(params->beta)
            << " alpha=" << format_double(params->alpha) << " J=" << format_double(params->coupling)
            << " seed=" << params->seed << " rng=" << Rng::kName << '\n';
    }
    const int L = lattice.side();
    out << L << ' ' << L << '\n' << kUpLevel << '\n';
    for (int r = 0; r < L; ++r) {
        for (int c = 0; c < L; ++c) {
            if (c > 0) out << ' ';
            out << (lattice.spin(Site{r, c}) > 0 ? kUpLevel : kDownLevel);
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

SpinLattice read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());

    std::string token;
    if (!next_token(in, token) || token != "P2") {
        throw Error(ErrorKind::Parse, path.string() + ": not a plain PGM (P2) file");
    }
    std::string w, h, maxval;
    if (!next_token(in, w) || !next_token(in, h) || !next_token(in, maxval)) {
        throw Error(ErrorKind::Parse, path.string() + ": truncated PGM header");
    }
    const int width = parse_int(w, path);
    const int height = parse_int(h, path);
    if (width != height) throw Error(ErrorKind::Parse, path.string() + ": snapshot is not square");
    if (parse_int(maxval, path) != kUpLevel) {
        throw Error(ErrorKind::Parse, path.string() + ": expected maxval 255");
    }

    std::vector<std::int8_t> spins;
    spins.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    while (next_token(in, token)) {
        const int level = parse_int(token, path);
        if (level == kUpLevel) {
            spins.push_back(1);
        } else if (level == kDownLevel) {
            spins.push_back(-1);
        } else {
            throw Error(ErrorKind::Parse, path.string() + ": pixel value " + token + " is not 0 or 255");
        }
    }
    if (spins.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw Error(ErrorKind::Parse, path.string() + ": pixel count does not match header");
    }
    return SpinLattice::from_spins(width, std::move(spins));
}

}  // namespace spinmarket
