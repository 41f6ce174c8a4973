#pragma once

#include <cmath>
#include <functional>

#include "cref/errors.hpp"

namespace cref::detail {

// Solves f(x) = target for a strictly increasing f on the bracket [lo, hi].
// Newton steps from the bracket midpoint when a derivative is supplied,
// falling back to bisection whenever a step leaves the bracket.
template <class F, class DF>
double solve_increasing(F&& f, DF&& df, double target, double lo, double hi,
                        double rel_tol, int max_iter, const char* what) {
    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    if (flo > 0.0 || fhi < 0.0)
        throw domain_error(std::string(what) + ": target outside bracket");
    double x = std::sqrt(lo * hi);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        double fx = f(x) - target;
        if (fx > 0.0) hi = x; else lo = x;
        double d = df(x);
        double step = (d > 0.0 && std::isfinite(d)) ? fx / d : 0.0;
        double xn = x - step;
        if (!(xn > lo && xn < hi) || step == 0.0)
            xn = (lo > 0.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        double err = std::abs(xn - x) / std::max(std::abs(xn), 1e-300);
        x = xn;
        if (err < rel_tol || hi - lo < rel_tol * std::max(std::abs(x), 1e-300))
            return x;
    }
    throw convergence_error(std::string(what) + ": iteration cap exceeded");
}

// Golden-section minimization on [lo, hi]; returns the abscissa of the minimum.
template <class F>
double golden_min(F&& f, double lo, double hi, double tol, int max_iter,
                  const char* what) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter; ++it) {
        if (b - a < tol) return 0.5 * (a + b);
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    throw convergence_error(std::string(what) + ": golden-section cap exceeded");
}

} // namespace cref::detail
