#pragma once

#include <optional>
#include <string>

#include "frobenius/equation.hpp"
#include "frobenius/recurrence.hpp"

namespace frobenius {

/// Shifted polynomial-form coefficients seen by the recurrence:
///   g_0(x) = P_1 x(x-1) + Q_0 x
///   g_j(x) = P_{j+1} x(x-1) + Q_j x + R_{j-1},   j >= 1.
/// Substituting sum w_k x^{k+rho} into P f'' + Q f' + R f gives
/// sum_j w_{n-j} g_j(rho + n - j) = 0 for every n.
class FrameCoefficients {
public:
    explicit FrameCoefficients(const LocalFrame& frame)
        : P_(frame.P.coefficients()), Q_(frame.Q.coefficients()), R_(frame.R.coefficients()),
          span_(static_cast<int>(frame.finite_count) - 1) {}

    int span() const noexcept { return span_; }

    Complex g(int j, Complex x) const {
        Complex v = at(P_, j + 1) * x * (x - 1.0) + at(Q_, j) * x;
        if (j >= 1) v += at(R_, j - 1);
        return v;
    }

    /// d/dx g_j(x).
    Complex dg(int j, Complex x) const { return at(P_, j + 1) * (2.0 * x - 1.0) + at(Q_, j); }

private:
    static Complex at(const std::vector<Complex>& c, int d) {
        if (d < 0 || d >= static_cast<int>(c.size())) return 0.0;
        return c[static_cast<std::size_t>(d)];
    }

    std::vector<Complex> P_, Q_, R_;
    int span_;
};

/// Recurrence mu(j, k) = -g_j(rho + k - j) / g_0(rho + k) for a critical exponent rho.
///
/// Throws Resonance(k) if g_0(rho + k) vanishes for some 1 <= k <= max_order.
/// A `gauge_row` k0 is exempt: its row is replaced by mu(., k0) = 0, which
/// pins w_{k0} to whatever inhomogeneity is supplied there.
inline CoefficientRule derive_rule(const LocalFrame& frame, Complex rho, long max_order,
                                   std::optional<long> gauge_row = std::nullopt) {
    const IndicialData ind = indicial(frame);
    const double scale = std::max(1.0, std::abs(ind.g0_coeffs[2]) * (std::norm(rho) + std::abs(rho)) +
                                           std::abs(ind.g0_coeffs[1]) * std::abs(rho));
    if (std::abs(ind.g0(rho)) > tol::exponent_check * scale)
        throw Error(ErrorCode::NotAnExponent, "rho is not a root of the indicial polynomial");

    const Complex other = std::abs(rho - ind.rho1) <= std::abs(rho - ind.rho2) ? ind.rho2 : ind.rho1;
    long m = 0;
    if (near_integer(other - rho, tol::resonance, m) && m >= 1 && m <= max_order &&
        !(gauge_row && *gauge_row == m)) {
        throw Error(ErrorCode::Resonance, "g0(rho + " + std::to_string(m) + ") = 0", m);
    }

    auto coeffs = std::make_shared<const FrameCoefficients>(frame);
    const std::optional<long> gauge = gauge_row;
    return CoefficientRule(
        coeffs->span(),
        [coeffs, rho, gauge](int j, long k) -> Complex {
            if (gauge && k == *gauge) return 0.0;
            const Complex x = rho + static_cast<double>(k);
            return -coeffs->g(j, x - static_cast<double>(j)) / coeffs->g(0, x);
        },
        RuleSource::ode_derived);
}

}  // namespace frobenius
