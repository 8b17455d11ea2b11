#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <vector>

#include "fms/common.hpp"

namespace fms {

/// Equality, residual and printing for a point domain. Floating instances
/// compare with tolerance kPointEqualityTolerance; discrete instances
/// compare exactly. Orbit bookkeeping that needs representation identity
/// uses operator== directly instead.
template <class P>
struct point_traits;

template <std::floating_point F>
struct point_traits<F> {
    static double residual(F a, F b) { return std::abs(static_cast<double>(a) - static_cast<double>(b)); }
    static bool equal(F a, F b) { return residual(a, b) <= kPointEqualityTolerance; }
    static std::string to_string(F p) { return format_double(static_cast<double>(p)); }
};

template <std::integral I>
struct point_traits<I> {
    static double residual(I a, I b) { return a >= b ? static_cast<double>(a - b) : static_cast<double>(b - a); }
    static bool equal(I a, I b) { return a == b; }
    static std::string to_string(I p) { return std::to_string(p); }
};

template <>
struct point_traits<std::vector<double>> {
    static double residual(const std::vector<double>& a, const std::vector<double>& b) {
        const std::size_t n = std::max(a.size(), b.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ai = i < a.size() ? a[i] : 0.0;
            const double bi = i < b.size() ? b[i] : 0.0;
            worst = std::max(worst, std::abs(ai - bi));
        }
        return worst;
    }
    static bool equal(const std::vector<double>& a, const std::vector<double>& b) {
        return residual(a, b) <= kPointEqualityTolerance;
    }
    static std::string to_string(const std::vector<double>& p) {
        std::string out = "(";
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i > 0) out += " ";
            out += format_double(p[i]);
        }
        return out + ")";
    }
};

}  // namespace fms
