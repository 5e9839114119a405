#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "frobenius/core.hpp"
#include "frobenius/polynomial.hpp"

namespace frobenius {

/// Second-order Fuchsian equation
///
///     f'' + sum_i gamma_i / (x - x_i) f' + V(x) / prod_i (x - x_i) f = 0
///
/// with F >= 2 finite regular singular points x_i. The point at infinity is
/// the (F+1)-th regular singular point, which requires deg V <= F - 2.
class FuchsianEquation {
public:
    const std::vector<Complex>& singular_points() const noexcept { return points_; }
    const std::vector<Complex>& gammas() const noexcept { return gammas_; }
    const Polynomial& van_vleck() const noexcept { return van_vleck_; }
    std::size_t finite_count() const noexcept { return points_.size(); }

    /// Distance from point i to the nearest other finite singular point.
    double local_radius(std::size_t i) const {
        if (i >= points_.size()) throw Error(ErrorCode::IndexOutOfRange, "point index", static_cast<long>(i));
        double r = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < points_.size(); ++l)
            if (l != i) r = std::min(r, std::abs(points_[l] - points_[i]));
        return r;
    }

    friend FuchsianEquation build_equation(std::vector<Complex> points, std::vector<Complex> gammas,
                                           Polynomial van_vleck);

private:
    FuchsianEquation() = default;

    std::vector<Complex> points_;
    std::vector<Complex> gammas_;
    Polynomial van_vleck_;
};

inline FuchsianEquation build_equation(std::vector<Complex> points, std::vector<Complex> gammas,
                                       Polynomial van_vleck) {
    if (points.size() != gammas.size())
        throw Error(ErrorCode::LengthMismatch, "singular_points and gammas differ in length");
    if (points.size() < 2) throw Error(ErrorCode::TooFewPoints, "need at least two finite singular points");
    for (const auto& z : points)
        if (!is_finite(z)) throw Error(ErrorCode::NonFinite, "singular point is not finite");
    for (const auto& z : gammas)
        if (!is_finite(z)) throw Error(ErrorCode::NonFinite, "gamma is not finite");
    for (const auto& z : van_vleck.coefficients())
        if (!is_finite(z)) throw Error(ErrorCode::NonFinite, "Van Vleck coefficient is not finite");

    double max_modulus = 1.0;
    for (const auto& z : points) max_modulus = std::max(max_modulus, std::abs(z));
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (std::abs(points[i] - points[j]) <= tol::distinct_points * max_modulus)
                throw Error(ErrorCode::DuplicatePoints,
                            "singular points " + std::to_string(i) + " and " + std::to_string(j) + " coincide",
                            static_cast<long>(j));

    const long F = static_cast<long>(points.size());
    if (van_vleck.degree() > F - 2)
        throw Error(ErrorCode::DegreeTooHigh, "deg V = " + std::to_string(van_vleck.degree()) +
                                                  " exceeds F - 2 = " + std::to_string(F - 2));

    FuchsianEquation eq;
    eq.points_ = std::move(points);
    eq.gammas_ = std::move(gammas);
    eq.van_vleck_ = std::move(van_vleck);
    return eq;
}

/// Gauss equation x(x-1) f'' + ((a+b+1)x - c) f' + ab f = 0.
inline FuchsianEquation preset_hypergeometric(Complex a, Complex b, Complex c) {
    return build_equation({0.0, 1.0}, {c, a + b - c + 1.0}, Polynomial::constant(a * b));
}

/// Heun equation with singular points 0, 1, a and accessory parameter q.
inline FuchsianEquation preset_heun(Complex a, Complex q, Complex alpha, Complex beta, Complex gamma, Complex delta,
                                    Complex epsilon) {
    if (std::abs(alpha + beta - gamma - delta - epsilon + 1.0) >= tol::fuchs_relation)
        throw Error(ErrorCode::FuchsRelationViolated, "alpha + beta - gamma - delta - epsilon + 1 != 0");
    return build_equation({0.0, 1.0, a}, {gamma, delta, epsilon}, Polynomial({-q, alpha * beta}));
}

/// Same equation in the variable x + t.
inline FuchsianEquation translate(const FuchsianEquation& eq, Complex t) {
    std::vector<Complex> pts = eq.singular_points();
    for (auto& p : pts) p += t;
    return build_equation(std::move(pts), eq.gammas(), eq.van_vleck().taylor_shift(-t));
}

/// P f'' + Q f' + R f = 0 with P = prod (x - x_i).
struct PolynomialForm {
    Polynomial P;
    Polynomial Q;
    Polynomial R;
};

inline PolynomialForm polynomial_form(const FuchsianEquation& eq) {
    const auto& pts = eq.singular_points();
    const auto& gam = eq.gammas();
    PolynomialForm form;
    form.P = Polynomial::from_roots(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<Complex> others;
        for (std::size_t l = 0; l < pts.size(); ++l)
            if (l != i) others.push_back(pts[l]);
        form.Q = form.Q + Polynomial::from_roots(others) * gam[i];
    }
    form.R = eq.van_vleck();
    return form;
}

/// The polynomial form translated so singular point `origin_index` sits at 0.
struct LocalFrame {
    std::size_t origin_index = 0;
    Complex origin;
    std::size_t finite_count = 0;
    /// Distance to the nearest other finite singular point.
    double radius = 0.0;
    Polynomial P;
    Polynomial Q;
    Polynomial R;
};

inline LocalFrame shift_to_point(const FuchsianEquation& eq, std::size_t i) {
    if (i >= eq.finite_count())
        throw Error(ErrorCode::IndexOutOfRange, "point index " + std::to_string(i), static_cast<long>(i));
    const PolynomialForm form = polynomial_form(eq);
    const Complex t = eq.singular_points()[i];
    LocalFrame frame;
    frame.origin_index = i;
    frame.origin = t;
    frame.finite_count = eq.finite_count();
    frame.radius = eq.local_radius(i);
    frame.P = form.P.taylor_shift(t);
    frame.Q = form.Q.taylor_shift(t);
    frame.R = form.R.taylor_shift(t);
    // P has a simple root at the origin by construction; remove rounding residue.
    std::vector<Complex> pc = frame.P.coefficients();
    if (!pc.empty()) pc[0] = 0.0;
    frame.P = Polynomial(std::move(pc));
    return frame;
}

enum class ExponentClass { generic, integer_difference, equal };

struct IndicialData {
    Complex rho1;
    Complex rho2;
    /// g0(x) = c[0] + c[1] x + c[2] x^2.
    std::array<Complex, 3> g0_coeffs{};
    ExponentClass classification = ExponentClass::generic;
    /// Exponent difference for integer_difference, else 0.
    long m = 0;
    /// Only set by indicial_at_infinity: infinity is an ordinary point.
    bool ordinary_point = false;

    Complex g0(Complex x) const { return g0_coeffs[0] + x * (g0_coeffs[1] + x * g0_coeffs[2]); }
};

inline std::string to_string(const IndicialData& d) {
    if (d.ordinary_point) return "ordinary";
    switch (d.classification) {
        case ExponentClass::generic: return "generic";
        case ExponentClass::equal: return "equal";
        case ExponentClass::integer_difference: return "integer_difference(" + std::to_string(d.m) + ")";
    }
    return "unknown";
}

namespace detail {

inline std::array<Complex, 2> quadratic_roots(const std::array<Complex, 3>& c) {
    if (c[2] == Complex(0.0)) throw Error(ErrorCode::DegenerateIndicial, "indicial polynomial is not quadratic");
    if (c[0] == Complex(0.0)) return {Complex(0.0), -c[1] / c[2]};
    const Complex disc = std::sqrt(c[1] * c[1] - 4.0 * c[2] * c[0]);
    const Complex plus = c[1] + disc;
    const Complex minus = c[1] - disc;
    const Complex q = -0.5 * (std::abs(plus) >= std::abs(minus) ? plus : minus);
    if (q == Complex(0.0)) return {Complex(0.0), Complex(0.0)};
    return {q / c[2], c[0] / q};
}

inline IndicialData classify(const std::array<Complex, 3>& g0) {
    auto roots = quadratic_roots(g0);
    IndicialData d;
    d.g0_coeffs = g0;
    Complex r1 = roots[0], r2 = roots[1];
    if (r2.real() > r1.real() || (r2.real() == r1.real() && r2.imag() > r1.imag())) std::swap(r1, r2);
    d.rho1 = r1;
    d.rho2 = r2;
    const Complex diff = r1 - r2;
    long m = 0;
    if (std::abs(diff) < tol::resonance) {
        d.classification = ExponentClass::equal;
    } else if (near_integer(diff, tol::resonance, m) && m >= 1) {
        d.classification = ExponentClass::integer_difference;
        d.m = m;
    }
    return d;
}

}  // namespace detail

/// Indicial data at the frame origin: g0(x) = P1 x(x-1) + Q0 x.
inline IndicialData indicial(const LocalFrame& frame) {
    const Complex p1 = frame.P.coeff(1);
    if (p1 == Complex(0.0)) throw Error(ErrorCode::DegenerateIndicial, "P'(origin) vanishes");
    const Complex q0 = frame.Q.coeff(0);
    return detail::classify({Complex(0.0), q0 - p1, p1});
}

/// Exponents at infinity in the variable 1/x: f ~ x^{-rho}.
inline IndicialData indicial_at_infinity(const FuchsianEquation& eq) {
    const PolynomialForm form = polynomial_form(eq);
    const long F = static_cast<long>(eq.finite_count());
    const Complex pf = form.P.coeff(F);
    const Complex qf = form.Q.coeff(F - 1);
    const Complex rf = form.R.coeff(F - 2);
    IndicialData d = detail::classify({rf, 2.0 * pf - qf - pf, pf});
    // Ordinary at infinity: p = 2/x + O(x^-2) and q = O(x^-4).
    d.ordinary_point = std::abs(qf - 2.0 * pf) < tol::resonance && std::abs(rf) < tol::resonance &&
                       std::abs(form.R.coeff(F - 3)) < tol::resonance;
    return d;
}

struct LocalPQ {
    std::vector<Complex> p;
    std::vector<Complex> q;
};

/// Taylor coefficients of x Q/P and x^2 R/P about the frame origin, j = 0..order.
inline LocalPQ local_pq_expansion(const LocalFrame& frame, std::size_t order) {
    const auto& pc = frame.P.coefficients();
    const Polynomial reduced(std::vector<Complex>(pc.begin() + 1, pc.end()));
    const Polynomial xR = frame.R * Polynomial({Complex(0.0), Complex(1.0)});
    return {series_quotient(frame.Q, reduced, order + 1), series_quotient(xR, reduced, order + 1)};
}

}  // namespace frobenius
