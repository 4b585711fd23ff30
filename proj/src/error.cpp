#include "spinmarket/error.hpp"

namespace spinmarket {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidDimension: return "invalid-dimension";
        case ErrorKind::Index: return "index";
        case ErrorKind::Configuration: return "configuration";
        case ErrorKind::InsufficientData: return "insufficient-data";
        case ErrorKind::DegenerateVariance: return "degenerate-variance";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Range: return "range";
        case ErrorKind::Io: return "io";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Schema: return "schema";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::EmptyInput: return "empty-input";
        case ErrorKind::Version: return "version";
    }
    return "unknown";
}

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Configuration:
        case ErrorKind::InvalidDimension:
            return 2;
        case ErrorKind::InsufficientData:
        case ErrorKind::DegenerateVariance:
        case ErrorKind::Domain:
        case ErrorKind::Range:
        case ErrorKind::Index:
            return 3;
        case ErrorKind::Io:
        case ErrorKind::Parse:
        case ErrorKind::Schema:
        case ErrorKind::Validation:
        case ErrorKind::EmptyInput:
        case ErrorKind::Version:
            return 1;
    }
    return 1;
}

}  // namespace spinmarket
