#include <gtest/gtest.h>

#include <thread>

#include "frobenius/series.hpp"
#include "frobenius/special.hpp"
#include "oracles.hpp"

using namespace frobenius;

namespace {

std::vector<Complex> ring(Complex origin, double r, int n, double phase = 0.3) {
    std::vector<Complex> pts;
    for (int k = 0; k < n; ++k) pts.push_back(origin + std::polar(r, phase - 2.6 + 5.2 * k / std::max(n - 1, 1)));
    return pts;
}

FuchsianEquation random_equation(oracle::Generator& gen) {
    const int F = gen.integer(2, 5);
    std::vector<Complex> pts, gam;
    for (int i = 0; i < F; ++i) {
        pts.push_back(gen.in_disk(0.4, std::polar(1.5, 2.0 * M_PI * i / F)));
        Complex g;
        long n = 0;
        do g = gen.in_disk(2.0);
        while (near_integer(g, 1e-3, n));
        gam.push_back(g);
    }
    return build_equation(pts, gam, Polynomial(gen.values(static_cast<std::size_t>(F - 1))));
}

}  // namespace

TEST(FirstSolution, HypergeometricCoefficients) {
    const Complex a(0.7, 0.3), b(-1.2, 0.5), c(1.9, -0.4);
    const auto sol = first_solution(preset_hypergeometric(a, b, c), 0, 60);
    EXPECT_EQ(sol.coeffs.values.size(), 61u);
    EXPECT_EQ(sol.coeffs.values[0], Complex(1.0));
    EXPECT_FALSE(sol.has_log());
    EXPECT_DOUBLE_EQ(sol.radius, 1.0);
    for (long k = 0; k <= 60; ++k)
        EXPECT_LT(oracle::relative_error(sol.coeffs.values[static_cast<std::size_t>(k)],
                                         oracle::gauss_term_via_logs(a, b, c, k)),
                  1e-12);
}

TEST(FirstSolution, HeunFirstCoefficientSign) {
    const Complex a(2.5, 1.0), q(0.4, -0.3), alpha(1.2, 0), beta(0.8, 0.1), gamma(1.4, 0), delta(0.6, 0);
    const Complex eps = alpha + beta - gamma - delta + 1.0;
    const auto eq = preset_heun(a, q, alpha, beta, gamma, delta, eps);
    const auto sol = first_solution(eq, 0, 10);
    EXPECT_LT(oracle::relative_error(sol.coeffs.values[1], q / (a * gamma)), 1e-14);
    // Low-order substitution: the x^0 coefficient of the substituted equation must vanish.
    const auto res = oracle::substitution_residual(eq, 0, 0.0, sol.coeffs.values);
    EXPECT_LT(std::abs(res[1]), 1e-14);
}

TEST(FirstSolution, MethodsAgree) {
    oracle::Generator gen(51);
    for (int trial = 0; trial < 30; ++trial) {
        const auto eq = random_equation(gen);
        for (std::size_t i = 0; i < eq.finite_count(); ++i) {
            const auto d = first_solution(eq, i, 40, SolveMethod::direct);
            const auto c = first_solution(eq, i, 40, SolveMethod::closed);
            for (std::size_t k = 0; k <= 40; ++k)
                EXPECT_LT(oracle::relative_error(c.coeffs.values[k], d.coeffs.values[k]), 1e-10);
        }
    }
}

TEST(Evaluate, KnownValues) {
    const auto eq = preset_hypergeometric(1.0, 1.0, 2.0);
    const auto sol = first_solution(eq, 0, 80);
    const auto half = evaluate(sol, 0.5);
    EXPECT_NEAR(half.value.real(), 2.0 * std::log(2.0), 1e-14);
    EXPECT_TRUE(half.in_domain);
    EXPECT_EQ(half.truncation_index, 80u);
    EXPECT_GE(half.tail_bound, std::abs(half.value - 2.0 * std::log(2.0)));
    EXPECT_EQ(evaluate(sol, 0.0).value, Complex(1.0));
    EXPECT_FALSE(evaluate(sol, 1.5).in_domain);

    const auto heun = first_solution(preset_heun(3.0, 1.0, 1.0, 2.0, 1.0, 2.0, 1.0), 0, 20);
    EXPECT_EQ(evaluate(heun, 0.0).value, Complex(1.0));
}

TEST(Evaluate, BranchPointInput) {
    const auto eq = preset_hypergeometric(0.3, 0.4, 1.7);  // exponents 0 and -0.7 at 0
    const auto f2 = second_solution(eq, 0, 30);
    EXPECT_THROW(evaluate(f2, 0.0), Error);
    const auto log_sol = second_solution(preset_hypergeometric(0.5, 0.5, 1.0), 0, 30);
    EXPECT_TRUE(log_sol.has_log());
    EXPECT_THROW(evaluate(log_sol, 0.0), Error);
}

TEST(Evaluate, TailBoundCoversTruncationError) {
    const Complex a(0.7, 0.3), b(-1.2, 0.5), c(1.9, -0.4);
    const auto eq = preset_hypergeometric(a, b, c);
    const auto lo = first_solution(eq, 0, 30);
    const auto hi = first_solution(eq, 0, 400);
    for (double r : {0.2, 0.5, 0.8}) {
        const Complex x = std::polar(r, 1.1);
        const auto e = evaluate(lo, x);
        EXPECT_TRUE(std::isfinite(e.tail_bound));
        EXPECT_GE(e.tail_bound, std::abs(e.value - evaluate(hi, x).value)) << r;
    }
}

TEST(EvaluateProperty, DerivativesMatchFiniteDifferences) {
    oracle::Generator gen(52);
    for (int trial = 0; trial < 20; ++trial) {
        const auto eq = random_equation(gen);
        const std::size_t i = static_cast<std::size_t>(gen.integer(0, static_cast<int>(eq.finite_count()) - 1));
        const auto f = second_solution(eq, i, 60);
        const double r = f.radius;
        const Complex x = f.origin + std::polar(0.3 * r, gen.uniform(-2.5, 2.5));
        const double h = 1e-6 * r;
        const auto jet = evaluate_jet(f, x);
        const Complex fd1 = oracle::derivative([&](Complex z) { return evaluate_jet(f, z).f; }, x, h);
        const Complex fd2 = oracle::derivative([&](Complex z) { return evaluate_jet(f, z).df; }, x, h);
        EXPECT_LT(oracle::relative_error(jet.df, fd1), 1e-5);
        EXPECT_LT(oracle::relative_error(jet.d2f, fd2), 1e-5);
    }
}

TEST(EvaluateProperty, ConjugateSymmetryForRealParameters) {
    const auto eq = preset_hypergeometric(0.3, 1.4, 0.6);
    const auto f1 = first_solution(eq, 0, 60);
    const auto f2 = second_solution(eq, 1, 60);
    const auto flog = second_solution(preset_hypergeometric(0.3, 1.4, 3.0), 0, 60);
    for (const Complex& x : {Complex(0.2, 0.3), Complex(-0.1, 0.25), Complex(0.5, -0.1)}) {
        EXPECT_LT(std::abs(evaluate(f1, std::conj(x)).value - std::conj(evaluate(f1, x).value)), 1e-14);
        EXPECT_LT(std::abs(evaluate(f2, std::conj(x)).value - std::conj(evaluate(f2, x).value)), 1e-13);
        EXPECT_LT(std::abs(evaluate(flog, std::conj(x)).value - std::conj(evaluate(flog, x).value)), 1e-12);
    }
}

TEST(EvaluateProperty, ConcurrentEvaluationIsDeterministic) {
    const auto sol = second_solution(preset_heun(2.0, 0.5, 1.0, 2.0, 1.0, 2.0, 1.0), 0, 60);
    const auto pts = ring(0.0, 0.5, 64);
    std::vector<Complex> serial, parallel(pts.size());
    for (const auto& x : pts) serial.push_back(evaluate(sol, x).value);
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < 4; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t k = static_cast<std::size_t>(t); k < pts.size(); k += 4) parallel[k] = evaluate(sol, pts[k]).value;
            });
    }
    EXPECT_EQ(serial, parallel);
}

TEST(SecondSolution, GenericHypergeometricForm) {
    const Complex a(0.7, 0.3), b(-1.2, 0.5), c(1.4, -0.2);
    const auto sol = second_solution(preset_hypergeometric(a, b, c), 0, 80);
    EXPECT_FALSE(sol.has_log());
    EXPECT_LT(std::abs(sol.exponent - (1.0 - c)), 1e-14);
    const HypergeometricParams t{a - c + 1.0, b - c + 1.0, 2.0 - c};
    for (const auto& x : ring(0.0, 0.2, 5)) {
        const Complex want = principal_pow(x, 1.0 - c) * gauss_2f1(t, x, 80).value;
        EXPECT_LT(oracle::relative_error(evaluate(sol, x).value, want), 1e-12);
    }
}

TEST(SecondSolution, EqualExponentsCarryLog) {
    const auto sol = second_solution(preset_hypergeometric(0.5, 0.5, 1.0), 0, 60);
    ASSERT_TRUE(sol.has_log());
    EXPECT_EQ(sol.log_coefficient, Complex(1.0));
    EXPECT_EQ(sol.coeffs.values[0], Complex(0.0));
    // Classical form for c = 1: v_k = w_k * sum_{j<k} (1/(a+j) + 1/(b+j) - 2/(j+1)).
    const Complex a(0.5), b(0.5);
    Complex h(0.0);
    for (long k = 1; k <= 30; ++k) {
        const double j = static_cast<double>(k - 1);
        h += 1.0 / (a + j) + 1.0 / (b + j) - 2.0 / (j + 1.0);
        const Complex want = oracle::gauss_term_via_logs(a, b, 1.0, k) * h;
        EXPECT_LT(oracle::relative_error(sol.coeffs.values[static_cast<std::size_t>(k)], want), 1e-12) << k;
    }
}

TEST(SecondSolution, IntegerDifferenceWithAndWithoutLog) {
    // c = 2, a = b = 1: second solution 1/x, no log.
    const auto nolog = second_solution(preset_hypergeometric(1.0, 1.0, 2.0), 0, 20);
    EXPECT_FALSE(nolog.has_log());
    EXPECT_EQ(nolog.exponent, Complex(-1.0));
    // c = 3, generic a, b: log present, v_m = 0 gauge.
    const auto withlog = second_solution(preset_hypergeometric(0.3, 1.4, 3.0), 0, 20);
    ASSERT_TRUE(withlog.has_log());
    EXPECT_EQ(withlog.coeffs.values[2], Complex(0.0));
    EXPECT_EQ(withlog.partner_exponent, Complex(0.0));
}

TEST(SecondSolution, MethodsAgreeAcrossCases) {
    for (const Complex c : {Complex(0.4, 0.2), Complex(1.0), Complex(2.0), Complex(3.0), Complex(-1.0)}) {
        const auto eq = preset_hypergeometric(Complex(0.3, 0.1), 1.4, c);
        for (std::size_t i = 0; i < 2; ++i) {
            const auto d = second_solution(eq, i, 50, SolveMethod::direct);
            const auto k = second_solution(eq, i, 50, SolveMethod::closed);
            EXPECT_EQ(d.log_coefficient, k.log_coefficient);
            for (std::size_t n = 0; n <= 50; ++n)
                EXPECT_LT(oracle::relative_error(k.coeffs.values[n], d.coeffs.values[n]), 1e-10);
        }
    }
}

TEST(Residual, ExactConstantSolution) {
    // V = 0 admits f = 1; the first solution at a point is exactly constant.
    const auto eq = build_equation({0.0, 1.0}, {1.5, 0.7}, Polynomial());
    const auto sol = first_solution(eq, 0, 20);
    for (std::size_t k = 1; k <= 20; ++k) EXPECT_EQ(sol.coeffs.values[k], Complex(0.0));
    EXPECT_EQ(residual(eq, sol, Complex(0.2, 0.1)), 0.0);
}

TEST(ResidualProperty, RandomEquationsBothSolutions) {
    oracle::Generator gen(53);
    for (int trial = 0; trial < 30; ++trial) {
        const auto eq = random_equation(gen);
        for (std::size_t i = 0; i < eq.finite_count(); ++i) {
            const auto f1 = first_solution(eq, i, 60);
            const auto f2 = second_solution(eq, i, 60);
            for (const auto& x : ring(f1.origin, 0.3 * f1.radius, 10)) {
                EXPECT_LE(residual(eq, f1, x), 1e-8);
                EXPECT_LE(residual(eq, f2, x), 1e-8);
            }
        }
    }
}

TEST(ResidualProperty, LogCases) {
    oracle::Generator gen(54);
    for (int trial = 0; trial < 20; ++trial) {
        const Complex a = gen.in_disk(3.0), b = gen.in_disk(3.0);
        const Complex c = static_cast<double>(gen.integer(-2, 4));
        const auto eq = preset_hypergeometric(a, b, c);
        for (std::size_t i = 0; i < 2; ++i) {
            const auto f2 = second_solution(eq, i, 60);
            for (const auto& x : ring(f2.origin, 0.3, 10)) EXPECT_LE(residual(eq, f2, x), 1e-6);
        }
    }
}

TEST(Wronskian, FactorExamples) {
    const auto zero = build_equation({0.0, 1.0}, {0.0, 0.0}, Polynomial());
    EXPECT_EQ(wronskian_factor(zero, Complex(0.3, 0.2)), Complex(1.0));
    const Complex a(0.3), b(1.4), c(0.6);
    const auto eq = preset_hypergeometric(a, b, c);
    const double x = 0.35;
    const Complex want = std::pow(x, -c.real()) * std::pow(Complex(x - 1.0), -(a + b - c + 1.0));
    EXPECT_LT(oracle::relative_error(wronskian_factor(eq, x), want), 1e-14);
    EXPECT_THROW(wronskian_factor(eq, 1.0), Error);
}

TEST(Wronskian, FactorSolvesFirstOrderEquation) {
    oracle::Generator gen(55);
    for (int trial = 0; trial < 20; ++trial) {
        const auto eq = random_equation(gen);
        const Complex x = eq.singular_points()[0] + std::polar(0.3, gen.uniform(-2.0, 2.0));
        for (const bool local : {false, true}) {
            auto W = [&](Complex z) { return local ? wronskian_factor_local(eq, 0, z) : wronskian_factor(eq, z); };
            Complex log_deriv(0.0);
            for (std::size_t j = 0; j < eq.finite_count(); ++j) log_deriv += eq.gammas()[j] / (x - eq.singular_points()[j]);
            const Complex d = oracle::derivative(W, x, 1e-5);
            EXPECT_LT(std::abs(d + log_deriv * W(x)) / std::abs(log_deriv * W(x)), 1e-6);
        }
    }
}

TEST(Wronskian, PairsAreIndependent) {
    const auto hyp = preset_hypergeometric(Complex(0.7, 0.3), 1.1, Complex(0.4, -0.2));
    const auto heun = preset_heun(3.0, 0.5, 1.0, 2.0, 1.5, 2.0, 0.5);
    for (const auto* eq : {&hyp, &heun}) {
        const auto f1 = first_solution(*eq, 0, 60);
        const auto f2 = second_solution(*eq, 0, 60);
        const auto samples = ring(0.0, 0.3, 5);
        const auto rep = wronskian_check(f1, f2, samples);
        EXPECT_FALSE(rep.dependent);
        EXPECT_LE(rep.max_deviation, 1e-6);
        EXPECT_EQ(rep.samples, 5u);
        const auto dep = wronskian_check(f1, scaled(f1, 2.0), samples);
        EXPECT_TRUE(dep.dependent);
    }
    const auto f1 = first_solution(hyp, 0, 20);
    const std::vector<Complex> bad{0.0, 5.0};
    EXPECT_THROW(wronskian_check(f1, f1, bad), Error);
}

TEST(GrowthBound, Examples) {
    const auto geo = preset_hypergeometric(1.0, 1.0, 1.0);
    const auto gb = growth_bound(shift_to_point(geo, 0), 0.0, 0.5);
    EXPECT_GT(gb.P, 1.0 + gb.M);
    EXPECT_TRUE(gb.dominates(first_solution(geo, 0, 200).coeffs));
    EXPECT_THROW(growth_bound(shift_to_point(geo, 0), 0.0, 1.5), Error);
}

TEST(GrowthBoundProperty, DominatesRandomEquations) {
    oracle::Generator gen(56);
    for (int trial = 0; trial < 30; ++trial) {
        const auto eq = random_equation(gen);
        for (std::size_t i = 0; i < eq.finite_count(); ++i) {
            const auto frame = shift_to_point(eq, i);
            const auto ind = indicial(frame);
            for (const double frac : {0.3, 0.5, 0.9}) {
                const auto gb = growth_bound(frame, ind.rho1, frac * frame.radius);
                EXPECT_GT(gb.P, 1.0 + gb.M);
                EXPECT_TRUE(gb.dominates(first_solution(eq, i, 200).coeffs));
            }
        }
    }
}

TEST(EmpiricalRadius, Examples) {
    const auto hyp = first_solution(preset_hypergeometric(Complex(0.7, 0.3), 1.1, Complex(0.4, -0.2)), 0, 200);
    EXPECT_NEAR(empirical_radius(hyp), 1.0, 0.15);
    const auto heun = first_solution(preset_heun(3.0, 0.5, 1.0, 2.0, 1.5, 2.0, 0.5), 0, 200);
    EXPECT_NEAR(empirical_radius(heun), 1.0, 0.15);
    const auto poly = first_solution(preset_hypergeometric(-3.0, 1.0, 1.5), 0, 60);
    EXPECT_TRUE(std::isinf(empirical_radius(poly)));
    EXPECT_THROW(empirical_radius(first_solution(preset_hypergeometric(1.0, 1.0, 2.0), 0, 10)), Error);
}
