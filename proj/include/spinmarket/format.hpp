#pragma once

#include <string>

namespace spinmarket {

/// Text form used by every CSV and PGM header: 17 significant digits, "%.17g".
[[nodiscard]] std::string format_double(double value);

}  // namespace spinmarket
