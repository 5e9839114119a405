#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "frobenius/core.hpp"

namespace frobenius {

/// Dense univariate polynomial, coefficients in ascending degree.
/// Trailing zeros are trimmed on construction so the highest stored
/// coefficient is nonzero; the zero polynomial stores nothing.
template <class T>
class BasicPolynomial {
public:
    BasicPolynomial() = default;
    BasicPolynomial(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }
    explicit BasicPolynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

    static BasicPolynomial constant(const T& value) { return BasicPolynomial({value}); }

    /// Monic polynomial with the given roots.
    static BasicPolynomial from_roots(std::span<const T> roots) {
        BasicPolynomial result = constant(T(1));
        for (const T& r : roots) result = result * BasicPolynomial({-r, T(1)});
        return result;
    }

    /// -1 for the zero polynomial.
    long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }

    /// Coefficient of x^d; zero outside the stored range.
    T coeff(long d) const noexcept {
        if (d < 0 || d >= static_cast<long>(c_.size())) return T(0);
        return c_[static_cast<std::size_t>(d)];
    }

    const std::vector<T>& coefficients() const noexcept { return c_; }

    T operator()(const T& x) const {
        T acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    BasicPolynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<T> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
        return BasicPolynomial(std::move(d));
    }

    /// Coefficients of p(x + t). Repeated synthetic division by (x - t):
    /// the remainders of successive Horner passes are the Taylor coefficients.
    BasicPolynomial taylor_shift(const T& t) const {
        std::vector<T> a = c_;
        const std::size_t n = a.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = n - 1; j > i; --j) a[j - 1] += t * a[j];
        }
        return BasicPolynomial(std::move(a));
    }

    friend BasicPolynomial operator+(const BasicPolynomial& a, const BasicPolynomial& b) {
        std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return BasicPolynomial(std::move(r));
    }

    friend BasicPolynomial operator-(const BasicPolynomial& a, const BasicPolynomial& b) {
        return a + b * T(-1);
    }

    friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return BasicPolynomial(std::move(r));
    }

    friend BasicPolynomial operator*(const BasicPolynomial& a, const T& s) {
        std::vector<T> r = a.c_;
        for (auto& x : r) x *= s;
        return BasicPolynomial(std::move(r));
    }

    friend bool operator==(const BasicPolynomial&, const BasicPolynomial&) = default;

private:
    void trim() {
        while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
    }

    std::vector<T> c_;
};

using Polynomial = BasicPolynomial<Complex>;

/// First `count` Taylor coefficients of num/den about 0. Requires den(0) != 0.
template <class T>
std::vector<T> series_quotient(const BasicPolynomial<T>& num, const BasicPolynomial<T>& den, std::size_t count) {
    const T d0 = den.coeff(0);
    if (d0 == T(0)) throw Error(ErrorCode::InvalidArgument, "series_quotient: denominator vanishes at 0");
    std::vector<T> out(count, T(0));
    const long dd = den.degree();
    for (std::size_t n = 0; n < count; ++n) {
        T acc = num.coeff(static_cast<long>(n));
        const long upper = std::min<long>(dd, static_cast<long>(n));
        for (long j = 1; j <= upper; ++j) acc -= den.coeff(j) * out[n - static_cast<std::size_t>(j)];
        out[n] = acc / d0;
    }
    return out;
}

}  // namespace frobenius
