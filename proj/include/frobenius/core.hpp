#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace frobenius {

using Complex = std::complex<double>;

enum class ErrorCode {
    LengthMismatch,
    DuplicatePoints,
    DegreeTooHigh,
    TooFewPoints,
    NonFinite,
    FuchsRelationViolated,
    IndexOutOfRange,
    DegenerateIndicial,
    NotAnExponent,
    Resonance,
    BranchPointInput,
    SingularInput,
    DegenerateSamples,
    PoleInC,
    OutOfDisk,
    ResonantGamma,
    IntegerExponentDifference,
    SizeLimit,
    RuleRange,
    InvalidArgument,
    Parse,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::DuplicatePoints: return "DuplicatePoints";
        case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
        case ErrorCode::TooFewPoints: return "TooFewPoints";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::FuchsRelationViolated: return "FuchsRelationViolated";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::DegenerateIndicial: return "DegenerateIndicial";
        case ErrorCode::NotAnExponent: return "NotAnExponent";
        case ErrorCode::Resonance: return "Resonance";
        case ErrorCode::BranchPointInput: return "BranchPointInput";
        case ErrorCode::SingularInput: return "SingularInput";
        case ErrorCode::DegenerateSamples: return "DegenerateSamples";
        case ErrorCode::PoleInC: return "PoleInC";
        case ErrorCode::OutOfDisk: return "OutOfDisk";
        case ErrorCode::ResonantGamma: return "ResonantGamma";
        case ErrorCode::IntegerExponentDifference: return "IntegerExponentDifference";
        case ErrorCode::SizeLimit: return "SizeLimit";
        case ErrorCode::RuleRange: return "RuleRange";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

/// Numeric/domain failures, as opposed to malformed input.
inline bool is_numeric_failure(ErrorCode code) {
    switch (code) {
        case ErrorCode::Resonance:
        case ErrorCode::BranchPointInput:
        case ErrorCode::SingularInput:
        case ErrorCode::DegenerateSamples:
        case ErrorCode::PoleInC:
        case ErrorCode::OutOfDisk:
        case ErrorCode::ResonantGamma:
        case ErrorCode::IntegerExponentDifference:
        case ErrorCode::DegenerateIndicial:
            return true;
        default:
            return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, long index = -1)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), index_(index) {}

    ErrorCode code() const noexcept { return code_; }
    /// Offending index (resonant k, bad point index, ...) or -1.
    long index() const noexcept { return index_; }

private:
    ErrorCode code_;
    long index_;
};

namespace tol {
inline constexpr double distinct_points = 1e-12;
inline constexpr double resonance = 1e-9;
inline constexpr double root_residual = 1e-10;
inline constexpr double exponent_check = 1e-8;
inline constexpr double fuchs_relation = 1e-9;
}  // namespace tol

inline bool is_finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Nearest integer to `z` if `z` lies within `eps` of it.
inline bool near_integer(const Complex& z, double eps, long& nearest) {
    const double r = std::round(z.real());
    if (std::abs(z - Complex(r, 0.0)) < eps) {
        nearest = static_cast<long>(r);
        return true;
    }
    return false;
}

inline Complex integer_pow(Complex z, long n) {
    if (n < 0) return Complex(1.0, 0.0) / integer_pow(z, -n);
    Complex result(1.0, 0.0);
    while (n > 0) {
        if (n & 1) result *= z;
        z *= z;
        n >>= 1;
    }
    return result;
}

/// Principal-branch z^e with 0^0 = 1 and 0^e = 0 for Re(e) > 0.
inline Complex principal_pow(const Complex& z, const Complex& e) {
    if (e == Complex(0.0, 0.0)) return {1.0, 0.0};
    if (z == Complex(0.0, 0.0)) {
        if (e.real() > 0.0) return {0.0, 0.0};
        return {std::numeric_limits<double>::infinity(), 0.0};
    }
    if (e.imag() == 0.0 && e.real() == std::round(e.real()) && std::abs(e.real()) < 64.0) {
        return integer_pow(z, static_cast<long>(e.real()));
    }
    return std::exp(e * std::log(z));
}

}  // namespace frobenius
