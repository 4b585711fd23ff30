#include "spinmarket/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>

#include "spinmarket/error.hpp"
#include "spinmarket/format.hpp"

namespace spinmarket {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// YYYY-MM-DD, optionally followed by a time part after 'T' or a space.
std::optional<std::chrono::sys_days> parse_date(const std::string& text) {
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0;
    const char* s = text.data();
    if (std::from_chars(s, s + 4, y).ptr != s + 4) return std::nullopt;
    if (std::from_chars(s + 5, s + 7, m).ptr != s + 7) return std::nullopt;
    if (std::from_chars(s + 8, s + 10, d).ptr != s + 10) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) return std::nullopt;
    return std::chrono::sys_days{ymd};
}

std::optional<double> parse_price(const std::string& text) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return v;
}

std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::vector<std::string> split_csv_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

PriceSeries load_price_csv(const std::filesystem::path& path, const CsvColumns& columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());

    const std::string where = path.string();
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (!trim(line).empty()) {
            header = split_csv_record(line);
            break;
        }
    }
    if (header.empty()) throw Error(ErrorKind::EmptyInput, where + ": no header row");
    for (auto& h : header) h = trim(h);

    const auto column_index = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            std::string available;
            for (const auto& h : header) available += (available.empty() ? "" : ", ") + ("'" + h + "'");
            throw Error(ErrorKind::Schema,
                        where + ": missing column '" + name + "'; available columns: " + available);
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t date_col = column_index(columns.date);
    const std::size_t price_col = column_index(columns.price);

    PriceSeries series;
    series.label = path.stem().string();
    std::optional<std::chrono::sys_days> previous;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_record(line);
        const auto context = where + " line " + std::to_string(line_no);
        if (fields.size() <= std::max(date_col, price_col)) {
            throw Error(ErrorKind::Validation, context + ": expected at least " +
                                                   std::to_string(std::max(date_col, price_col) + 1) +
                                                   " fields, got " + std::to_string(fields.size()));
        }
        const std::string date_text = trim(fields[date_col]);
        const auto date = parse_date(date_text);
        if (!date) throw Error(ErrorKind::Validation, context + ": '" + date_text + "' is not an ISO-8601 date");
        if (previous && *date <= *previous) {
            throw Error(ErrorKind::Validation,
                        context + ": date " + date_text + " breaks strict monotonicity (dates must increase)");
        }
        const std::string price_text = trim(fields[price_col]);
        const auto price = parse_price(price_text);
        if (!price || !std::isfinite(*price)) {
            throw Error(ErrorKind::Validation, context + ": price '" + price_text + "' is not a number");
        }
        if (*price <= 0.0) {
            throw Error(ErrorKind::Validation, context + ": price " + price_text + " is not positive");
        }
        previous = date;
        series.dates.push_back(date_text);
        series.prices.push_back(*price);
        ++series.rows_read;
    }
    if (series.prices.empty()) throw Error(ErrorKind::EmptyInput, where + ": no data rows");
    return series;
}

void write_price_csv(const PriceSeries& series, const std::filesystem::path& path, const CsvColumns& columns) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out << quote_if_needed(columns.date) << ',' << quote_if_needed(columns.price) << '\n';
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << series.dates[i] << ',' << format_double(series.prices[i]) << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace spinmarket
