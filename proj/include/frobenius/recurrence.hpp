#pragma once

#include <concepts>
#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "frobenius/core.hpp"

// Linear recurrences with variable coefficients
//
//     w_k = sum_{j=1}^{min(k, s)} mu(j, k) w_{k-j} + phi_k,   k >= 1,
//
// where every coefficient is evaluated at the output index k. Three ways of
// solving are provided: forward iteration, the composition expansion (each
// w_N is w_0 times a sum over ordered step sequences N -> ... -> 0), and the
// transfer bracket B(N, p), which sums that expansion by dynamic programming.

namespace frobenius {

template <class R>
concept RecurrenceRule = requires(const R& r, int j, long k) {
    { r.span() } -> std::convertible_to<int>;
    { r.mu(j, k) } -> std::convertible_to<Complex>;
};

enum class RuleSource { ode_derived, user_table, synthetic };

class CoefficientRule {
public:
    using Function = std::function<Complex(int j, long k)>;

    CoefficientRule(int span, Function mu, RuleSource source = RuleSource::synthetic)
        : span_(span), mu_(std::move(mu)), source_(source) {
        if (span < 1) throw Error(ErrorCode::InvalidArgument, "recurrence span must be >= 1");
    }

    int span() const noexcept { return span_; }
    RuleSource source() const noexcept { return source_; }

    /// mu(j, k) for 1 <= j <= span, k >= 1. Steps beyond the span contribute 0.
    Complex mu(int j, long k) const {
        if (j < 1 || j > span_) return 0.0;
        return mu_(j, k);
    }

private:
    int span_;
    Function mu_;
    RuleSource source_;
};

/// Dense snapshot mu(j, k) for k <= max_index.
class TabulatedRule {
public:
    template <RecurrenceRule R>
    TabulatedRule(const R& rule, long max_index)
        : span_(rule.span()), max_index_(max_index),
          table_(static_cast<std::size_t>(span_) * static_cast<std::size_t>(max_index + 1)) {
        for (long k = 1; k <= max_index; ++k)
            for (int j = 1; j <= span_; ++j) table_[slot(j, k)] = rule.mu(j, k);
    }

    int span() const noexcept { return span_; }
    long max_index() const noexcept { return max_index_; }

    Complex mu(int j, long k) const {
        if (j < 1 || j > span_) return 0.0;
        if (k < 1 || k > max_index_)
            throw Error(ErrorCode::RuleRange, "tabulated rule queried at k = " + std::to_string(k), k);
        return table_[slot(j, k)];
    }

private:
    std::size_t slot(int j, long k) const {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(span_) + static_cast<std::size_t>(j - 1);
    }

    int span_;
    long max_index_;
    std::vector<Complex> table_;
};

/// Lazily filled cache in front of a rule. Concurrent reads are shared;
/// concurrent writes of the same key store the same value.
template <RecurrenceRule R>
class MemoizedRule {
public:
    explicit MemoizedRule(R rule) : rule_(std::move(rule)), state_(std::make_shared<State>()) {}

    int span() const { return rule_.span(); }

    Complex mu(int j, long k) const {
        if (j < 1 || j > rule_.span()) return 0.0;
        const Key key{j, k};
        {
            std::shared_lock lock(state_->mutex);
            if (auto it = state_->cache.find(key); it != state_->cache.end()) return it->second;
        }
        const Complex value = rule_.mu(j, k);
        std::unique_lock lock(state_->mutex);
        state_->cache.emplace(key, value);
        return value;
    }

    std::size_t cached_entries() const {
        std::shared_lock lock(state_->mutex);
        return state_->cache.size();
    }

private:
    struct Key {
        int j;
        long k;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& key) const noexcept {
            return std::hash<long>{}(key.k * 64 + key.j);
        }
    };
    struct State {
        mutable std::shared_mutex mutex;
        std::unordered_map<Key, Complex, KeyHash> cache;
    };

    R rule_;
    std::shared_ptr<State> state_;
};

class InhomogeneityRule {
public:
    using Function = std::function<Complex(long k)>;

    explicit InhomogeneityRule(Function phi) : phi_(std::move(phi)) {}

    static InhomogeneityRule zero() {
        return InhomogeneityRule([](long) { return Complex(0.0); });
    }

    Complex operator()(long k) const { return phi_(k); }

private:
    Function phi_;
};

struct CoefficientTable {
    std::vector<Complex> values;
    Complex start_exponent{0.0};

    std::size_t order() const noexcept { return values.empty() ? 0 : values.size() - 1; }
    const Complex& operator[](std::size_t k) const { return values[k]; }
};

template <RecurrenceRule R>
CoefficientTable iterate_direct_inhomogeneous(const R& rule, const InhomogeneityRule& phi, Complex v0, long N) {
    if (N < 0) throw Error(ErrorCode::InvalidArgument, "order must be >= 0");
    CoefficientTable table;
    table.values.assign(static_cast<std::size_t>(N + 1), Complex(0.0));
    table.values[0] = v0;
    const int s = rule.span();
    for (long k = 1; k <= N; ++k) {
        Complex acc = phi(k);
        for (int j = 1; j <= s && j <= k; ++j) acc += rule.mu(j, k) * table.values[static_cast<std::size_t>(k - j)];
        table.values[static_cast<std::size_t>(k)] = acc;
    }
    return table;
}

template <RecurrenceRule R>
CoefficientTable iterate_direct(const R& rule, Complex w0, long N) {
    if (N < 0) throw Error(ErrorCode::InvalidArgument, "order must be >= 0");
    CoefficientTable table;
    table.values.assign(static_cast<std::size_t>(N + 1), Complex(0.0));
    table.values[0] = w0;
    const int s = rule.span();
    for (long k = 1; k <= N; ++k) {
        Complex acc(0.0);
        for (int j = 1; j <= s && j <= k; ++j) acc += rule.mu(j, k) * table.values[static_cast<std::size_t>(k - j)];
        table.values[static_cast<std::size_t>(k)] = acc;
    }
    return table;
}

/// All ordered tuples of parts in 1..s summing to N, lexicographic.
inline std::vector<std::vector<int>> enumerate_compositions(int N, int s) {
    if (N < 0 || s < 1) throw Error(ErrorCode::InvalidArgument, "enumerate_compositions needs N >= 0, s >= 1");
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    auto recurse = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        for (int part = 1; part <= s && part <= remaining; ++part) {
            current.push_back(part);
            self(self, remaining - part);
            current.pop_back();
        }
    };
    recurse(recurse, N);
    return out;
}

/// Product of mu(s_i, p_i) along the step sequence p_1 = top, p_{i+1} = p_i - s_i.
template <RecurrenceRule R>
Complex composition_product(const R& rule, const std::vector<int>& parts, long top) {
    Complex prod(1.0);
    long position = top;
    for (int part : parts) {
        prod *= rule.mu(part, position);
        position -= part;
    }
    return prod;
}

/// w_N by explicit summation over every composition of N. Exponential in N.
template <RecurrenceRule R>
Complex composition_sum(const R& rule, Complex w0, int N) {
    Complex acc(0.0);
    for (const auto& parts : enumerate_compositions(N, rule.span())) acc += composition_product(rule, parts, N);
    return acc * w0;
}

/// B(m, p) for m = p..N: B(p, p) = 1, B(m, p) = sum_j mu(j, m) B(m - j, p).
template <RecurrenceRule R>
std::vector<Complex> bracket_forward(const R& rule, long p, long N) {
    if (p < 0 || p > N) throw Error(ErrorCode::InvalidArgument, "transfer bracket needs 0 <= p <= N");
    const int s = rule.span();
    std::vector<Complex> b(static_cast<std::size_t>(N - p + 1), Complex(0.0));
    b[0] = 1.0;
    for (long m = p + 1; m <= N; ++m) {
        Complex acc(0.0);
        for (int j = 1; j <= s && m - j >= p; ++j) acc += rule.mu(j, m) * b[static_cast<std::size_t>(m - j - p)];
        b[static_cast<std::size_t>(m - p)] = acc;
    }
    return b;
}

/// B(N, p) for p = 0..N, accumulated from the bottom step upwards:
/// B(N, N) = 1, B(N, p) = sum_j B(N, p + j) mu(j, p + j).
template <RecurrenceRule R>
std::vector<Complex> bracket_adjoint(const R& rule, long N) {
    if (N < 0) throw Error(ErrorCode::InvalidArgument, "order must be >= 0");
    const int s = rule.span();
    std::vector<Complex> b(static_cast<std::size_t>(N + 1), Complex(0.0));
    b[static_cast<std::size_t>(N)] = 1.0;
    for (long p = N - 1; p >= 0; --p) {
        Complex acc(0.0);
        for (int j = 1; j <= s && p + j <= N; ++j)
            acc += b[static_cast<std::size_t>(p + j)] * rule.mu(j, p + j);
        b[static_cast<std::size_t>(p)] = acc;
    }
    return b;
}

template <RecurrenceRule R>
Complex transfer_bracket(const R& rule, long N, long p) {
    return bracket_forward(rule, p, N).back();
}

template <RecurrenceRule R>
Complex theorem1_closed_form(const R& rule, Complex w0, long N) {
    return transfer_bracket(rule, N, 0) * w0;
}

/// w_0..w_N with w_k = B(k, 0) w_0.
template <RecurrenceRule R>
CoefficientTable closed_form_table(const R& rule, Complex w0, long N) {
    if (N < 0) throw Error(ErrorCode::InvalidArgument, "order must be >= 0");
    CoefficientTable table;
    table.values = bracket_forward(rule, 0, N);
    for (auto& v : table.values) v *= w0;
    return table;
}

/// v_N = B(N, 0) v_0 + sum_{p=1}^N B(N, p) phi_p.
template <RecurrenceRule R>
Complex theorem2_closed_form(const R& rule, const InhomogeneityRule& phi, Complex v0, long N) {
    const std::vector<Complex> b = bracket_adjoint(rule, N);
    Complex acc = b[0] * v0;
    for (long p = 1; p <= N; ++p) acc += b[static_cast<std::size_t>(p)] * phi(p);
    return acc;
}

/// v_0..v_N, each entry from its own bracket expansion. O(N^2 s).
template <RecurrenceRule R>
CoefficientTable closed_form_table_inhomogeneous(const R& rule, const InhomogeneityRule& phi, Complex v0, long N) {
    if (N < 0) throw Error(ErrorCode::InvalidArgument, "order must be >= 0");
    const TabulatedRule tab(rule, std::max<long>(N, 1));
    std::vector<Complex> phis(static_cast<std::size_t>(N + 1), Complex(0.0));
    for (long p = 1; p <= N; ++p) phis[static_cast<std::size_t>(p)] = phi(p);
    CoefficientTable table;
    table.values.resize(static_cast<std::size_t>(N + 1));
    table.values[0] = v0;
    for (long n = 1; n <= N; ++n) {
        const std::vector<Complex> b = bracket_adjoint(tab, n);
        Complex acc = b[0] * v0;
        for (long p = 1; p <= n; ++p) acc += b[static_cast<std::size_t>(p)] * phis[static_cast<std::size_t>(p)];
        table.values[static_cast<std::size_t>(n)] = acc;
    }
    return table;
}

}  // namespace frobenius
