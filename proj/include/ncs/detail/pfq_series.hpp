#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ncs/errors.hpp"

namespace ncs::detail {

template <class T>
struct PfqSum {
    T value;
    T abs_error;
    std::size_t terms;
    T max_term;
};

template <class T>
bool is_nonpositive_integer(const T& v, long* which = nullptr) {
    using std::floor;
    using std::abs;
    if (v > T(0)) return false;
    T r = floor(v + T(0.5));
    if (abs(v - r) != T(0)) return false;
    if (which) *which = static_cast<long>(-r);
    return true;
}

// Hypergeometric series by running term ratios. Works for double and for
// multiprecision number types with ADL-visible abs/floor.
template <class T>
PfqSum<T> pfq_series(const std::vector<T>& a, const std::vector<T>& b, const T& x, const T& rel_tol,
                     std::size_t cap = 100000) {
    using std::abs;
    const std::size_t C = a.size(), D = b.size();

    // A numerator parameter -m stops the series after term m.
    long stop = -1;
    for (const T& ai : a) {
        long m;
        if (is_nonpositive_integer(ai, &m) && (stop < 0 || m < stop)) stop = m;
    }
    for (const T& bj : b) {
        long m;
        if (is_nonpositive_integer(bj, &m) && (stop < 0 || m < stop))
            raise(ErrorKind::PoleParameter, "pfq: denominator parameter is a non-positive integer reached by the series", m);
    }
    if (stop < 0 && x != T(0)) {
        if (C > D + 1) raise(ErrorKind::Divergent, "pfq: series diverges for p > q + 1");
        if (C == D + 1 && abs(x) > T(1)) raise(ErrorKind::Divergent, "pfq: |x| outside the unit disc for p = q + 1");
    }

    T scale(0);
    for (const T& ai : a) scale = (abs(ai) > scale) ? abs(ai) : scale;
    for (const T& bj : b) scale = (abs(bj) > scale) ? abs(bj) : scale;

    T term(1), sum(1), biggest(1);
    for (std::size_t k = 0; k < cap; ++k) {
        if (stop >= 0 && static_cast<long>(k) >= stop) return {sum, T(0), k + 1, biggest};
        T ratio = x / T(k + 1);
        for (const T& ai : a) ratio *= (ai + T(k));
        for (const T& bj : b) ratio /= (bj + T(k));
        term *= ratio;
        sum += term;
        if (abs(term) > biggest) biggest = abs(term);
        if (term == T(0)) return {sum, T(0), k + 2, biggest};

        if (T(k) > scale && abs(term) <= rel_tol * abs(sum)) {
            T next = x / T(k + 2);
            for (const T& ai : a) next *= (ai + T(k + 1));
            for (const T& bj : b) next /= (bj + T(k + 1));
            T rho = abs(next);
            if (rho < T(1)) {
                T tail = abs(term) * rho / (T(1) - rho);
                T rounding = biggest * rel_tol * T(k + 2);
                return {sum, tail + rounding, k + 2, biggest};
            }
        }
    }
    raise(ErrorKind::Divergent, "pfq: term cap reached before convergence", static_cast<long>(cap));
}

}  // namespace ncs::detail
