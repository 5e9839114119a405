#pragma once

#include <cmath>
#include <vector>

#include "frobenius/core.hpp"
#include "frobenius/series.hpp"

// Reference implementations of the Gauss hypergeometric series and the
// local Heun function, written straight from their closed-form coefficient
// formulas. They share no code path with the generic recurrence engine.

namespace frobenius {

struct HypergeometricParams {
    Complex a, b, c;
};

struct HeunParams {
    Complex a, q, alpha, beta, gamma, delta, epsilon;
};

/// (x)_k = x (x+1) ... (x+k-1), (x)_0 = 1.
inline Complex pochhammer(Complex x, long k) {
    Complex acc(1.0);
    for (long j = 0; j < k; ++j) acc *= x + static_cast<double>(j);
    return acc;
}

namespace detail {

inline void require_c_regular(const HypergeometricParams& p) {
    long n = 0;
    if (near_integer(p.c, tol::resonance, n) && n <= 0)
        throw Error(ErrorCode::PoleInC, "c is a nonpositive integer");
}

/// Sum with the same geometric tail estimate used for Frobenius series.
inline EvaluationResult sum_power_series(const std::vector<Complex>& c, Complex x, double radius) {
    EvaluationResult out;
    Complex acc(0.0);
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    out.value = acc;
    out.truncation_index = c.empty() ? 0 : c.size() - 1;
    out.in_domain = std::abs(x) < radius;
    out.tail_bound = geometric_tail(c, radius, std::abs(x));
    return out;
}

}  // namespace detail

/// (a)_k (b)_k / (k! (c)_k), formed as a running product of term ratios so
/// that large k does not overflow.
inline Complex gauss_coefficient(const HypergeometricParams& p, long k) {
    detail::require_c_regular(p);
    Complex acc(1.0);
    for (long j = 0; j < k; ++j) {
        const double dj = static_cast<double>(j);
        acc *= (p.a + dj) * (p.b + dj) / ((dj + 1.0) * (p.c + dj));
    }
    return acc;
}

inline std::vector<Complex> gauss_coefficients(const HypergeometricParams& p, long N) {
    detail::require_c_regular(p);
    std::vector<Complex> c(static_cast<std::size_t>(N + 1));
    c[0] = 1.0;
    for (long k = 0; k < N; ++k) {
        const double dk = static_cast<double>(k);
        c[static_cast<std::size_t>(k + 1)] =
            c[static_cast<std::size_t>(k)] * (p.a + dk) * (p.b + dk) / ((dk + 1.0) * (p.c + dk));
    }
    return c;
}

/// F(a, b; c; x) truncated at order N.
inline EvaluationResult gauss_2f1(const HypergeometricParams& p, Complex x, long N) {
    if (std::abs(x) >= 1.0) throw Error(ErrorCode::OutOfDisk, "|x| >= 1");
    return detail::sum_power_series(gauss_coefficients(p, N), x, 1.0);
}

/// Coefficients of Hl(a, q; alpha, beta, gamma, delta; x) from the three-term
/// recurrence
///   w_{k+2} = m1(k+2) w_{k+1} + m2(k+2) w_k,
///   m1(k+2) = ((k+1)((k+gamma)(a+1) + a delta + eps) + q) / (a (k+2)(k+gamma+1)),
///   m2(k+2) = -(k+alpha)(k+beta) / (a (k+2)(k+gamma+1)),
/// with w_0 = 1 and w_1 = m1 at k = -1, i.e. q / (a gamma).
/// Only gamma is checked; a = 1 is allowed here for the degenerate reduction.
inline std::vector<Complex> heun_coefficients(const HeunParams& p, long N) {
    long n = 0;
    if (near_integer(p.gamma, tol::resonance, n) && n <= 0)
        throw Error(ErrorCode::ResonantGamma, "gamma is a nonpositive integer");
    std::vector<Complex> w(static_cast<std::size_t>(N + 1), Complex(0.0));
    w[0] = 1.0;
    auto m1 = [&](double k) {
        return ((k + 1.0) * ((k + p.gamma) * (p.a + 1.0) + p.a * p.delta + p.epsilon) + p.q) /
               (p.a * (k + 2.0) * (k + p.gamma + 1.0));
    };
    auto m2 = [&](double k) { return -(k + p.alpha) * (k + p.beta) / (p.a * (k + 2.0) * (k + p.gamma + 1.0)); };
    if (N >= 1) w[1] = m1(-1.0);
    for (long k = 0; k + 2 <= N; ++k) {
        const double dk = static_cast<double>(k);
        w[static_cast<std::size_t>(k + 2)] =
            m1(dk) * w[static_cast<std::size_t>(k + 1)] + m2(dk) * w[static_cast<std::size_t>(k)];
    }
    return w;
}

inline void validate(const HeunParams& p) {
    if (std::abs(p.alpha + p.beta - p.gamma - p.delta - p.epsilon + 1.0) >= tol::fuchs_relation)
        throw Error(ErrorCode::FuchsRelationViolated, "alpha + beta - gamma - delta - epsilon + 1 != 0");
    if (std::abs(p.a) <= tol::distinct_points || std::abs(p.a - 1.0) <= tol::distinct_points)
        throw Error(ErrorCode::DuplicatePoints, "a coincides with 0 or 1");
}

inline EvaluationResult heun_local(const HeunParams& p, Complex x, long N) {
    validate(p);
    const double radius = std::min(1.0, std::abs(p.a));
    if (std::abs(x) >= radius) throw Error(ErrorCode::OutOfDisk, "|x| >= min(1, |a|)");
    return detail::sum_power_series(heun_coefficients(p, N), x, radius);
}

/// Parameters of the Hl factor in the second local solution
/// x^{1-gamma} Hl(a, (a delta + eps)(1 - gamma) + q; alpha+1-gamma, beta+1-gamma, 2-gamma, delta; x).
/// epsilon' follows from the Fuchs relation and equals epsilon.
inline HeunParams heun_second_params(const HeunParams& p) {
    const Complex one_minus_gamma = 1.0 - p.gamma;
    HeunParams t;
    t.a = p.a;
    t.q = (p.a * p.delta + p.epsilon) * one_minus_gamma + p.q;
    t.alpha = p.alpha + one_minus_gamma;
    t.beta = p.beta + one_minus_gamma;
    t.gamma = 2.0 - p.gamma;
    t.delta = p.delta;
    t.epsilon = t.alpha + t.beta - t.gamma - t.delta + 1.0;
    return t;
}

inline EvaluationResult heun_second_local(const HeunParams& p, Complex x, long N) {
    validate(p);
    long n = 0;
    if (near_integer(1.0 - p.gamma, tol::resonance, n))
        throw Error(ErrorCode::IntegerExponentDifference, "1 - gamma is an integer");
    const HeunParams t = heun_second_params(p);
    const double radius = std::min(1.0, std::abs(p.a));
    if (std::abs(x) >= radius) throw Error(ErrorCode::OutOfDisk, "|x| >= min(1, |a|)");
    EvaluationResult r = detail::sum_power_series(heun_coefficients(t, N), x, radius);
    const Complex factor = principal_pow(x, 1.0 - p.gamma);
    r.value *= factor;
    r.tail_bound *= std::abs(factor);
    return r;
}

}  // namespace frobenius
