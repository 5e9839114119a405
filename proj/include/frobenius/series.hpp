#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "frobenius/equation.hpp"
#include "frobenius/ode_rule.hpp"
#include "frobenius/recurrence.hpp"

namespace frobenius {

enum class SolveMethod { direct, closed };

/// Local solution about singular point x_i, with eta = x - x_i:
///
///     f(x) = eta^rho sum_k v_k eta^k  +  A ln(eta) eta^rho1 sum_k w_k eta^k
///
/// The logarithmic part is present only when A != 0; then `log_partner`
/// holds the first-solution coefficients w_k and `partner_exponent` is rho1.
struct FrobeniusSolution {
    FuchsianEquation equation;
    std::size_t point_index = 0;
    Complex origin;
    Complex exponent;
    CoefficientTable coeffs;
    Complex log_coefficient{0.0};
    std::optional<CoefficientTable> log_partner;
    Complex partner_exponent{0.0};
    double radius = 0.0;

    bool has_log() const noexcept { return log_partner.has_value(); }
};

struct EvaluationResult {
    Complex value;
    std::size_t truncation_index = 0;
    double tail_bound = 0.0;
    bool in_domain = true;
};

/// f, f' and f'' at one point.
struct SeriesJet {
    Complex f;
    Complex df;
    Complex d2f;
};

namespace detail {

inline CoefficientTable solve_homogeneous(const CoefficientRule& rule, Complex w0, long N, SolveMethod method) {
    return method == SolveMethod::direct ? iterate_direct(rule, w0, N) : closed_form_table(rule, w0, N);
}

inline CoefficientTable solve_inhomogeneous(const CoefficientRule& rule, const InhomogeneityRule& phi, Complex v0,
                                            long N, SolveMethod method) {
    return method == SolveMethod::direct ? iterate_direct_inhomogeneous(rule, phi, v0, N)
                                         : closed_form_table_inhomogeneous(rule, phi, v0, N);
}

inline CoefficientTable truncated(CoefficientTable t, long N) {
    t.values.resize(static_cast<std::size_t>(N + 1));
    return t;
}

/// Right-hand side produced by the term A ln(eta) f1 in P f'' + Q f' + R f:
/// coefficient D_t = sum_j w_{t-j} g_j'(rho1 + t - j) of eta^{t + rho1 - 1}.
inline Complex log_cross_term(const FrameCoefficients& fc, const std::vector<Complex>& w, Complex rho1, long t) {
    Complex acc(0.0);
    for (int j = 0; j <= fc.span() && j <= t; ++j)
        acc += w[static_cast<std::size_t>(t - j)] * fc.dg(j, rho1 + static_cast<double>(t - j));
    return acc;
}

/// Jet of eta^rho sum_k c_k eta^k.
inline SeriesJet power_series_jet(std::span<const Complex> c, Complex rho, Complex eta) {
    SeriesJet jet{0.0, 0.0, 0.0};
    if (eta == Complex(0.0)) {
        // Term-wise: only exponents with nonnegative real part survive at the origin.
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (c[k] == Complex(0.0)) continue;
            const Complex e = rho + static_cast<double>(k);
            jet.f += c[k] * principal_pow(eta, e);
            if (e != Complex(0.0)) jet.df += c[k] * e * principal_pow(eta, e - 1.0);
            if (e != Complex(0.0) && e != Complex(1.0))
                jet.d2f += c[k] * e * (e - 1.0) * principal_pow(eta, e - 2.0);
        }
        return jet;
    }
    Complex s0(0.0), s1(0.0), s2(0.0);
    for (std::size_t idx = c.size(); idx-- > 0;) {
        const Complex e = rho + static_cast<double>(idx);
        s0 = s0 * eta + c[idx];
        s1 = s1 * eta + c[idx] * e;
        s2 = s2 * eta + c[idx] * e * (e - 1.0);
    }
    const Complex base = principal_pow(eta, rho);
    jet.f = base * s0;
    jet.df = base * s1 / eta;
    jet.d2f = base * s2 / (eta * eta);
    return jet;
}

/// Geometric majorant C q^k fitted to the trailing coefficients, summed past
/// the truncation index and inflated 2x. Zero for terminating tails.
inline double geometric_tail(std::span<const Complex> c, double radius, double abs_eta) {
    const std::size_t n = c.size();
    if (n == 0) return 0.0;
    const std::size_t window = std::min<std::size_t>(10, n);
    std::vector<std::pair<double, double>> pts;  // (k, log|c_k|)
    for (std::size_t k = n - window; k < n; ++k)
        if (std::abs(c[k]) > 0.0) pts.emplace_back(static_cast<double>(k), std::log(std::abs(c[k])));
    if (pts.empty()) return 0.0;
    double slope = 0.0;
    if (pts.size() >= 2) {
        double mk = 0.0, ml = 0.0;
        for (auto [k, l] : pts) {
            mk += k;
            ml += l;
        }
        mk /= static_cast<double>(pts.size());
        ml /= static_cast<double>(pts.size());
        double num = 0.0, den = 0.0;
        for (auto [k, l] : pts) {
            num += (k - mk) * (l - ml);
            den += (k - mk) * (k - mk);
        }
        slope = den > 0.0 ? num / den : 0.0;
    }
    const double log_q = std::max(slope, std::isfinite(radius) ? -std::log(radius) : slope);
    double log_c = -std::numeric_limits<double>::infinity();
    for (auto [k, l] : pts) log_c = std::max(log_c, l - log_q * k);
    const double ratio_log = log_q + std::log(abs_eta);
    if (abs_eta == 0.0) return 0.0;
    if (ratio_log >= 0.0) return std::numeric_limits<double>::infinity();
    const double ratio = std::exp(ratio_log);
    return 2.0 * std::exp(log_c + static_cast<double>(n) * ratio_log) / (1.0 - ratio);
}

}  // namespace detail

/// Solution for the exponent with the larger real part, w_0 = 1.
inline FrobeniusSolution first_solution(const FuchsianEquation& eq, std::size_t point_index, long N,
                                        SolveMethod method = SolveMethod::closed) {
    if (N < 0) throw Error(ErrorCode::InvalidArgument, "order must be >= 0");
    const LocalFrame frame = shift_to_point(eq, point_index);
    const IndicialData ind = indicial(frame);
    const CoefficientRule rule = derive_rule(frame, ind.rho1, N);
    FrobeniusSolution sol{eq, point_index, frame.origin, ind.rho1, detail::solve_homogeneous(rule, 1.0, N, method),
                          0.0, std::nullopt, 0.0, frame.radius};
    sol.coeffs.start_exponent = ind.rho1;
    return sol;
}

/// Second, linearly independent solution.
///
/// generic exponents: plain series at rho2.
/// rho1 - rho2 = m >= 1: series at rho2 with v_m = 0; the row-m consistency
///   condition fixes A, and rows past m pick up the inhomogeneity from A ln(eta) f1.
/// rho1 = rho2: A = 1, v_0 = 0.
inline FrobeniusSolution second_solution(const FuchsianEquation& eq, std::size_t point_index, long N,
                                         SolveMethod method = SolveMethod::closed) {
    if (N < 0) throw Error(ErrorCode::InvalidArgument, "order must be >= 0");
    const LocalFrame frame = shift_to_point(eq, point_index);
    const IndicialData ind = indicial(frame);
    FrobeniusSolution sol{eq, point_index, frame.origin, ind.rho2, {}, 0.0, std::nullopt, 0.0, frame.radius};

    if (ind.classification == ExponentClass::generic) {
        sol.coeffs = detail::solve_homogeneous(derive_rule(frame, ind.rho2, N), 1.0, N, method);
        sol.coeffs.start_exponent = ind.rho2;
        return sol;
    }

    const FrameCoefficients fc(frame);
    const long m = ind.classification == ExponentClass::equal ? 0 : ind.m;
    const long order = std::max(N, m);
    const CoefficientTable f1 = detail::solve_homogeneous(derive_rule(frame, ind.rho1, order), 1.0, order, method);
    const std::vector<Complex>& w = f1.values;

    Complex A(0.0);
    Complex v0(1.0);
    CoefficientRule rule = m == 0 ? derive_rule(frame, ind.rho2, order) : derive_rule(frame, ind.rho2, order, m);
    if (m == 0) {
        A = 1.0;
        v0 = 0.0;
    } else {
        // v_0..v_{m-1} follow the homogeneous rule; row m then reads
        //   sum_j v_{m-j} g_j(rho2 + m - j) = -A w_0 g_0'(rho1).
        const CoefficientTable head = iterate_direct(rule, 1.0, m - 1);
        Complex s(0.0);
        double magnitude = 0.0;
        for (int j = 1; j <= fc.span() && j <= m; ++j) {
            const Complex term = head.values[static_cast<std::size_t>(m - j)] *
                                 fc.g(j, ind.rho2 + static_cast<double>(m - j));
            s += term;
            magnitude += std::abs(term);
        }
        if (std::abs(s) > 1e-12 * magnitude) A = -s / fc.dg(0, ind.rho1);
    }

    const Complex rho1 = ind.rho1, rho2 = ind.rho2;
    auto phi_values = std::make_shared<std::vector<Complex>>(static_cast<std::size_t>(order + 1), Complex(0.0));
    if (A != Complex(0.0)) {
        for (long n = m + 1; n <= order; ++n) {
            (*phi_values)[static_cast<std::size_t>(n)] =
                -A * detail::log_cross_term(fc, w, rho1, n - m) / fc.g(0, rho2 + static_cast<double>(n));
        }
    }
    const InhomogeneityRule phi([phi_values](long k) { return (*phi_values)[static_cast<std::size_t>(k)]; });

    sol.coeffs = detail::truncated(detail::solve_inhomogeneous(rule, phi, v0, order, method), N);
    sol.coeffs.start_exponent = rho2;
    sol.log_coefficient = A;
    if (A != Complex(0.0)) {
        sol.log_partner = detail::truncated(f1, N);
        sol.log_partner->start_exponent = rho1;
        sol.partner_exponent = rho1;
    }
    return sol;
}

/// Whichever of the two local solutions starts with exponent `rho`.
inline FrobeniusSolution solution_with_exponent(const FuchsianEquation& eq, std::size_t point_index, Complex rho,
                                                long N, SolveMethod method = SolveMethod::closed) {
    const IndicialData ind = indicial(shift_to_point(eq, point_index));
    const double d1 = std::abs(ind.rho1 - rho), d2 = std::abs(ind.rho2 - rho);
    if (std::min(d1, d2) > tol::exponent_check * (1.0 + std::abs(rho)))
        throw Error(ErrorCode::NotAnExponent, "rho is not an exponent at this point");
    return d1 <= d2 ? first_solution(eq, point_index, N, method) : second_solution(eq, point_index, N, method);
}

/// f, f', f'' at x (derivatives with respect to x).
inline SeriesJet evaluate_jet(const FrobeniusSolution& sol, Complex x) {
    const Complex eta = x - sol.origin;
    if (eta == Complex(0.0) && (sol.exponent.real() < 0.0 || sol.has_log()))
        throw Error(ErrorCode::BranchPointInput, "solution is singular at its expansion point");
    SeriesJet jet = detail::power_series_jet(sol.coeffs.values, sol.exponent, eta);
    if (sol.has_log()) {
        const SeriesJet y = detail::power_series_jet(sol.log_partner->values, sol.partner_exponent, eta);
        const Complex L = std::log(eta);
        const Complex& A = sol.log_coefficient;
        jet.f += A * L * y.f;
        jet.df += A * (y.f / eta + L * y.df);
        jet.d2f += A * (-y.f / (eta * eta) + 2.0 * y.df / eta + L * y.d2f);
    }
    return jet;
}

inline EvaluationResult evaluate(const FrobeniusSolution& sol, Complex x) {
    const Complex eta = x - sol.origin;
    const double r = std::abs(eta);
    EvaluationResult out;
    out.value = evaluate_jet(sol, x).f;
    out.truncation_index = sol.coeffs.order();
    out.in_domain = r < sol.radius;
    const double scale = r == 0.0 ? 0.0 : std::exp(sol.exponent.real() * std::log(r) - sol.exponent.imag() * std::arg(eta));
    out.tail_bound = r == 0.0 ? 0.0 : scale * detail::geometric_tail(sol.coeffs.values, sol.radius, r);
    if (sol.has_log() && r > 0.0) {
        const double pscale =
            std::exp(sol.partner_exponent.real() * std::log(r) - sol.partner_exponent.imag() * std::arg(eta));
        out.tail_bound += std::abs(sol.log_coefficient) * std::abs(std::log(eta)) * pscale *
                          detail::geometric_tail(sol.log_partner->values, sol.radius, r);
    }
    return out;
}

/// |P f'' + Q f' + R f| relative to the sum of the term magnitudes.
inline double residual(const FuchsianEquation& eq, const FrobeniusSolution& sol, Complex x) {
    const PolynomialForm form = polynomial_form(eq);
    const SeriesJet jet = evaluate_jet(sol, x);
    const Complex a = form.P(x) * jet.d2f;
    const Complex b = form.Q(x) * jet.df;
    const Complex c = form.R(x) * jet.f;
    return std::abs(a + b + c) / (std::abs(a) + std::abs(b) + std::abs(c) + 1e-300);
}

/// prod_j (x - x_j)^{-gamma_j}, principal branches.
inline Complex wronskian_factor(const FuchsianEquation& eq, Complex x) {
    Complex acc(1.0);
    for (std::size_t j = 0; j < eq.finite_count(); ++j) {
        const Complex d = x - eq.singular_points()[j];
        if (d == Complex(0.0)) throw Error(ErrorCode::SingularInput, "x is a singular point", static_cast<long>(j));
        acc *= principal_pow(d, -eq.gammas()[j]);
    }
    return acc;
}

/// Same product with branches continuous on the disk about x_i (cut along
/// x_i + negative reals only), matching the branch of the local solutions.
inline Complex wronskian_factor_local(const FuchsianEquation& eq, std::size_t i, Complex x) {
    const auto& pts = eq.singular_points();
    const Complex eta = x - pts[i];
    if (eta == Complex(0.0)) throw Error(ErrorCode::SingularInput, "x is the expansion point", static_cast<long>(i));
    Complex acc = principal_pow(eta, -eq.gammas()[i]);
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j == i) continue;
        const Complex base = pts[i] - pts[j];
        acc *= principal_pow(base, -eq.gammas()[j]) * principal_pow(1.0 + eta / base, -eq.gammas()[j]);
    }
    return acc;
}

struct WronskianReport {
    /// max_k |ratio_k - mean| / |mean|; infinite for a dependent pair.
    double max_deviation = 0.0;
    Complex mean;
    bool dependent = false;
    std::size_t samples = 0;
};

/// Constancy of (f1 f2' - f1' f2) / prod (x - x_j)^{-gamma_j} over the samples.
inline WronskianReport wronskian_check(const FrobeniusSolution& f1, const FrobeniusSolution& f2,
                                       std::span<const Complex> samples) {
    if (f1.point_index != f2.point_index || f1.origin != f2.origin)
        throw Error(ErrorCode::InvalidArgument, "solutions have different expansion points");
    std::vector<Complex> ratios;
    double worst_scale = 0.0;
    double worst_value = 0.0;
    bool all_small = true;
    for (const Complex& x : samples) {
        const Complex eta = x - f1.origin;
        if (eta == Complex(0.0) || std::abs(eta) >= f1.radius) continue;
        const SeriesJet a = evaluate_jet(f1, x);
        const SeriesJet b = evaluate_jet(f2, x);
        const Complex w = a.f * b.df - a.df * b.f;
        const double scale = std::abs(a.f * b.df) + std::abs(a.df * b.f);
        if (std::abs(w) > 1e-10 * scale) all_small = false;
        worst_scale = std::max(worst_scale, scale);
        worst_value = std::max(worst_value, std::abs(w));
        ratios.push_back(w / wronskian_factor_local(f1.equation, f1.point_index, x));
    }
    if (ratios.size() < 2) throw Error(ErrorCode::DegenerateSamples, "fewer than two valid samples");
    WronskianReport report;
    report.samples = ratios.size();
    for (const auto& r : ratios) report.mean += r;
    report.mean /= static_cast<double>(ratios.size());
    if (all_small) {
        report.dependent = true;
        report.max_deviation = std::numeric_limits<double>::infinity();
        return report;
    }
    for (const auto& r : ratios)
        report.max_deviation = std::max(report.max_deviation, std::abs(r - report.mean) / std::abs(report.mean));
    return report;
}

/// Constants of the majorant |w_k| <= P^k / R1^k.
struct GrowthBound {
    double M = 0.0;
    double R1 = 0.0;
    double P = 0.0;
    long N0 = 1;

    bool dominates(const CoefficientTable& t) const {
        for (std::size_t k = 0; k < t.values.size(); ++k) {
            const double a = std::abs(t.values[k]);
            if (a == 0.0) continue;
            if (std::log(a) > static_cast<double>(k) * (std::log(P) - std::log(R1)) + 1e-12) return false;
        }
        return true;
    }
};

/// M bounds |p_j| + |q_j| R1^j, N0 starts the range where
/// |f0(rho + n)| > |rho| + n, and P > 1 + M also covers w_1..w_{N0-1}.
/// Then |w_n| <= sum_k (M / R1^k) |w_{n-k}| <= P^n / R1^n by induction.
inline GrowthBound growth_bound(const LocalFrame& frame, Complex rho, double R1) {
    if (!(R1 > 0.0 && R1 < frame.radius)) throw Error(ErrorCode::InvalidArgument, "need 0 < R1 < radius");
    GrowthBound gb;
    gb.R1 = R1;

    // (R1/radius)^j j^c decays; scan far enough that the maximum is behind us.
    const double decay = std::log(frame.radius / R1);
    const std::size_t J = static_cast<std::size_t>(std::clamp(200.0 + 80.0 / decay, 200.0, 20000.0));
    const LocalPQ pq = local_pq_expansion(frame, J);
    double log_M = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= J; ++j) {
        const double a = std::abs(pq.p[j]) + std::abs(pq.q[j]);
        if (a > 0.0) log_M = std::max(log_M, std::log(a) + static_cast<double>(j) * std::log(R1));
    }
    gb.M = std::max(std::exp(log_M), 1e-12);

    const Complex p0 = pq.p[0], q0 = pq.q[0];
    const auto f0 = [&](Complex x) { return x * (x - 1.0) + p0 * x + q0; };
    const double ar = std::abs(rho);
    // Lower bound (n - |rho|)(n - |rho| - 1 - |p0|) - |q0| beats |rho| + n from here on.
    double n_safe = ar + 1.0 + std::abs(p0) + 1.0;
    while ((n_safe - ar) * (n_safe - ar - 1.0 - std::abs(p0)) - std::abs(q0) <= ar + n_safe) n_safe += 1.0;
    long N0 = 1;
    for (long n = static_cast<long>(n_safe); n >= 1; --n) {
        if (std::abs(f0(rho + static_cast<double>(n))) <= ar + static_cast<double>(n)) {
            N0 = n + 1;
            break;
        }
    }
    gb.N0 = N0;

    double P = 1.0 + gb.M;
    if (N0 > 1) {
        const CoefficientTable head = iterate_direct(derive_rule(frame, rho, N0 - 1), 1.0, N0 - 1);
        for (long k = 1; k < N0; ++k) {
            const double a = std::abs(head.values[static_cast<std::size_t>(k)]);
            if (a > 0.0) P = std::max(P, std::exp((std::log(a) + static_cast<double>(k) * std::log(R1)) / k));
        }
    }
    gb.P = P * (1.0 + 1e-9);
    return gb;
}

/// 1 / median(|w_k|^{1/k}) over the top quartile of k; +inf for a terminating series.
inline double empirical_radius(const FrobeniusSolution& sol) {
    const std::size_t N = sol.coeffs.order();
    if (N < 40) throw Error(ErrorCode::InvalidArgument, "empirical_radius needs at least 40 coefficients");
    std::vector<double> roots;
    for (std::size_t k = (3 * N + 3) / 4; k <= N; ++k) {
        const double a = std::abs(sol.coeffs.values[k]);
        if (a > 1e-300) roots.push_back(std::exp(std::log(a) / static_cast<double>(k)));
    }
    if (roots.empty()) return std::numeric_limits<double>::infinity();
    std::sort(roots.begin(), roots.end());
    const std::size_t n = roots.size();
    const double median = n % 2 ? roots[n / 2] : 0.5 * (roots[n / 2 - 1] + roots[n / 2]);
    return 1.0 / median;
}

/// Copy of `sol` multiplied by a constant.
inline FrobeniusSolution scaled(FrobeniusSolution sol, Complex factor) {
    for (auto& v : sol.coeffs.values) v *= factor;
    sol.log_coefficient *= factor;
    return sol;
}

}  // namespace frobenius
