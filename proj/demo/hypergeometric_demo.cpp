// Builds the Gauss equation for F(1, 1; 2; x) = -log(1 - x) / x, solves it
// with the generic engine, and compares against the closed form.
#include <cmath>
#include <cstdio>

#include "frobenius/series.hpp"
#include "frobenius/special.hpp"

int main() {
    using namespace frobenius;
    const FuchsianEquation eq = preset_hypergeometric(1.0, 1.0, 2.0);
    const FrobeniusSolution f1 = first_solution(eq, 0, 80);
    const FrobeniusSolution f2 = second_solution(eq, 0, 80);

    std::printf("exponents at 0: %g, %g\n", f1.exponent.real(), f2.exponent.real());
    std::printf("log coefficient of the second solution: %.6g\n", std::abs(f2.log_coefficient));
    for (double x : {0.1, 0.3, 0.5}) {
        const EvaluationResult r = evaluate(f1, Complex(x));
        std::printf("x = %.1f  series = %.15f  exact = %.15f  tail <= %.2e  residual = %.1e\n", x, r.value.real(),
                    -std::log1p(-x) / x, r.tail_bound, residual(eq, f1, Complex(x)));
    }
    const GrowthBound gb = growth_bound(shift_to_point(eq, 0), 0.0, 0.5);
    std::printf("|w_k| <= P^k / R1^k with P = %.4g, R1 = %.2g (N0 = %ld)\n", gb.P, gb.R1, gb.N0);
}
