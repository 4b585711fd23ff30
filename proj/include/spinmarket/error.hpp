#pragma once

#include <stdexcept>
#include <string>

namespace spinmarket {

enum class ErrorKind {
    InvalidDimension,
    Index,
    Configuration,
    InsufficientData,
    DegenerateVariance,
    Domain,
    Range,
    Io,
    Parse,
    Schema,
    Validation,
    EmptyInput,
    Version,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit code without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// 0 success, 1 IO/parse, 2 configuration, 3 numerical/insufficient data.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace spinmarket
