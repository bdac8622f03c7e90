#pragma once

#include <stdexcept>
#include <string>

namespace hpdro {

/// Error categories, mapped to CLI exit codes (config -> 2, infeasible -> 3,
/// timeout -> 4, everything else -> 1).
enum class ErrorCode {
    config,
    invalid_argument,
    infeasible,
    timeout,
    io,
    numeric,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& msg) {
    if (!cond) throw Error(code, msg);
}

} // namespace hpdro
