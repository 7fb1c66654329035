#include "qnoise/error.hpp"

namespace qnoise {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::NotPositiveSemidefinite: return "not-positive-semidefinite";
        case ErrorKind::NumericalFailure: return "numerical-failure";
        case ErrorKind::CpViolation: return "cp-violation";
        case ErrorKind::DegenerateData: return "degenerate-data";
        case ErrorKind::FitError: return "fit-error";
    }
    return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidInput:
        case ErrorKind::DegenerateData: return 2;
        default: return 3;
    }
}

}  // namespace qnoise
