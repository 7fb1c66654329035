#pragma once

#include <stdexcept>
#include <string>

namespace qnoise {

enum class ErrorKind {
    InvalidInput,
    NotPositiveSemidefinite,
    NumericalFailure,
    CpViolation,
    DegenerateData,
    FitError,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

// 2 = validation, 3 = numerical
int exit_code(ErrorKind kind) noexcept;

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::InvalidInput, what);
}

}  // namespace qnoise
