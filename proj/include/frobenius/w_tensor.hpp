#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "frobenius/core.hpp"
#include "frobenius/recurrence.hpp"

// Index tuples of the 0/1 tensor W. A tuple is written from its highest
// position down to position 0. It is admissible when its entries sum to its
// length and it splits into blocks (z+1, 0, ..., 0) with exactly z zeros:
// W_1, W_11, W_20, W_111, W_120, W_201, W_300, ... A length-L admissible tuple
// is a composition of L read off its block values, so contracting W against
// the recurrence coefficients reproduces w_L.

namespace frobenius {

struct WIndexTuple {
    std::vector<int> indices;
};

inline constexpr int kMaxContractionLength = 12;

/// 1 if the tuple is admissible, else 0.
inline int w_tensor_component(std::span<const int> t) {
    if (t.empty()) return 1;
    long sum = 0;
    for (int a : t) {
        if (a < 0) return 0;
        sum += a;
    }
    if (sum != static_cast<long>(t.size())) return 0;
    std::size_t pos = 0;
    while (pos < t.size()) {
        const int head = t[pos];
        if (head == 0) return 0;  // zero run not preceded by its block head
        const std::size_t zeros = static_cast<std::size_t>(head - 1);
        if (pos + 1 + zeros > t.size()) return 0;
        for (std::size_t z = 1; z <= zeros; ++z)
            if (t[pos + z] != 0) return 0;
        pos += 1 + zeros;
    }
    return 1;
}

inline int w_tensor_component(const WIndexTuple& t) { return w_tensor_component(std::span<const int>(t.indices)); }

/// Visit every tuple of `length` nonnegative entries summing to `length`
/// (the only tuples the sum rule lets through).
template <class Visitor>
void for_each_sum_tuple(int length, Visitor&& visit) {
    std::vector<int> t(static_cast<std::size_t>(length), 0);
    auto recurse = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == length - 1) {
            t[static_cast<std::size_t>(pos)] = remaining;
            visit(std::span<const int>(t));
            return;
        }
        for (int a = 0; a <= remaining; ++a) {
            t[static_cast<std::size_t>(pos)] = a;
            self(self, pos + 1, remaining - a);
        }
    };
    if (length == 0) {
        visit(std::span<const int>(t));
        return;
    }
    recurse(recurse, 0, length);
}

/// Number of admissible tuples of the given length whose entries are all <= max_value.
inline std::uint64_t count_admissible(int length, int max_value) {
    std::uint64_t count = 0;
    for_each_sum_tuple(length, [&](std::span<const int> t) {
        if (!w_tensor_component(t)) return;
        for (int a : t)
            if (a > max_value) return;
        ++count;
    });
    return count;
}

/// Partial contraction of W against the recurrence coefficients between
/// output index N and floor p: sums W(t) prod X over tuples of length N - p.
/// A block of value z starting r places from the left contributes
/// mu(z, N - r); zero entries contribute the step function theta = 1.
/// With p = 0 this is w_N for w_0 = 1; in general it equals B(N, p).
template <RecurrenceRule R>
Complex contract_multilinear(const R& rule, long N, long p = 0) {
    if (p < 0 || p > N) throw Error(ErrorCode::InvalidArgument, "contraction needs 0 <= p <= N");
    const long length = N - p;
    if (length > kMaxContractionLength)
        throw Error(ErrorCode::SizeLimit, "tensor contraction limited to length " +
                                              std::to_string(kMaxContractionLength));
    Complex acc(0.0);
    for_each_sum_tuple(static_cast<int>(length), [&](std::span<const int> t) {
        if (!w_tensor_component(t)) return;
        Complex prod(1.0);
        for (std::size_t r = 0; r < t.size(); ++r) {
            if (t[r] == 0) continue;
            prod *= rule.mu(t[r], N - static_cast<long>(r));
        }
        acc += prod;
    });
    return acc;
}

}  // namespace frobenius
