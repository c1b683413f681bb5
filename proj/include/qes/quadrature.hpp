#ifndef QES_QUADRATURE_HPP
#define QES_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>

#include "qes/errors.hpp"

namespace qes {

/// Composite Simpson rule over uniformly spaced samples with spacing h.
/// An odd interval count is closed with a 3/8 rule on the last three cells.
template <typename T>
T simpson(std::span<const T> f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return T{};
    if (n == 2) return (f[0] + f[1]) * (h / 2.0);  // trapezoid fallback

    std::size_t intervals = n - 1;
    std::size_t simpson_end = n;  // one past the last index used by pure Simpson
    T total{};
    if (intervals % 2 != 0) {
        if (n < 4) throw config_error("simpson: need at least 4 points for odd interval count");
        // 3/8 rule on the last three intervals
        total += (f[n - 4] + 3.0 * f[n - 3] + 3.0 * f[n - 2] + f[n - 1]) * (3.0 * h / 8.0);
        simpson_end = n - 3;
        if (simpson_end == 1) return total;
    }
    T odd{};
    T even{};
    for (std::size_t i = 1; i + 1 < simpson_end; i += 2) odd += f[i];
    for (std::size_t i = 2; i + 1 < simpson_end; i += 2) even += f[i];
    total += (f[0] + f[simpson_end - 1] + 4.0 * odd + 2.0 * even) * (h / 3.0);
    return total;
}

namespace detail {

inline double adaptive_simpson_step(const std::function<double(double)>& f, double a, double b,
                                    double fa, double fm, double fb, double whole, double tol,
                                    int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (fa + 4.0 * flm + fm) * (m - a) / 6.0;
    const double right = (fm + 4.0 * frm + fb) * (b - m) / 6.0;
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f on [a, b] to relative tolerance rel_tol.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-12, int max_depth = 48) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (fa + 4.0 * fm + fb) * (b - a) / 6.0;
    const double scale = std::max(std::abs(whole), 1.0);
    return detail::adaptive_simpson_step(f, a, b, fa, fm, fb, whole, rel_tol * scale, max_depth);
}

}  // namespace qes

#endif
