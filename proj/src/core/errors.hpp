#pragma once

#include <stdexcept>
#include <string>

namespace pnsurf {

// Error taxonomy. The category drives the CLI exit code and the C API
// status: input errors exit 2, degeneracy errors exit 3, verification
// failures exit 1.
enum class ErrorCode {
    // input / IO
    parse,
    pole_proximity,
    still_near_pole,
    io,
    // degeneracies
    zero_normal,
    north_pole,
    degenerate_plane,
    gauss_degenerate,
    globally_degenerate,
    corner_mismatch,
    degenerate_tangent,
    non_adjacent,
    pole_eval,
    singular_matrix,
    not_pythagorean,
    empty_solution,
    // verification
    verification,
    internal,
};

enum class ErrorCategory { input, degeneracy, verification, internal };

inline ErrorCategory category_of(ErrorCode c) {
    switch (c) {
    case ErrorCode::parse:
    case ErrorCode::pole_proximity:
    case ErrorCode::still_near_pole:
    case ErrorCode::io:
        return ErrorCategory::input;
    case ErrorCode::verification:
        return ErrorCategory::verification;
    case ErrorCode::internal:
        return ErrorCategory::internal;
    default:
        return ErrorCategory::degeneracy;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}

    ErrorCode code() const { return code_; }
    ErrorCategory category() const { return category_of(code_); }

private:
    ErrorCode code_;
};

} // namespace pnsurf
