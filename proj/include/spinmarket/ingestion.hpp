#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace spinmarket {

/// Adjusted-close series with strictly increasing ISO-8601 dates.
struct PriceSeries {
    std::vector<std::string> dates;
    std::vector<double> prices;
    std::string label;
    std::size_t rows_read = 0;

    [[nodiscard]] std::size_t size() const noexcept { return prices.size(); }
};

struct CsvColumns {
    std::string date = "Date";
    std::string price = "Adj Close";
};

/// Splits one CSV record; double quotes may wrap fields and "" escapes a quote.
[[nodiscard]] std::vector<std::string> split_csv_record(const std::string& line);

/**
 * Loads a comma-separated file with a header row. Blank lines are skipped and
 * rows are neither reordered nor imputed.
 *
 * Errors: Io when unreadable, Schema for a missing column (lists available
 * columns), Validation with the line number for bad dates, non-increasing
 * dates or non-positive prices, EmptyInput when no data rows remain.
 */
[[nodiscard]] PriceSeries load_price_csv(const std::filesystem::path& path, const CsvColumns& columns = {});

void write_price_csv(const PriceSeries& series, const std::filesystem::path& path,
                     const CsvColumns& columns = {});

}  // namespace spinmarket
