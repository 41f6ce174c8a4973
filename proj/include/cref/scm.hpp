#pragma once

#include <cmath>
#include <string>

#include "cref/devmodel.hpp"
#include "cref/errors.hpp"
#include "cref/rootfind.hpp"

namespace cref {

struct ScmDesign {
    double alpha = 1.5;    // i_f1/i_f2, > 1
    double N = 3.0;        // mirror current ratio
    double S2 = 1.0;       // aspect ratio of the bottom device
    double isq_ratio = 1.0; // I_SQ2/I_SQ1 across flavors
    std::string flavor;

    void validate() const {
        if (!(alpha > 1.0))
            throw domain_error("ScmDesign: alpha must exceed 1");
        if (!(N >= 1.0))
            throw domain_error("ScmDesign: N must be >= 1");
        if (!(S2 > 0.0) || !(isq_ratio > 0.0))
            throw domain_error("ScmDesign: S2 and isq_ratio must be positive");
    }
};

struct ScmBiasSolution {
    double i_f2 = 0.0;
    double i_f1 = 0.0;
    double v_x = 0.0;   // V
    double i_ref = 0.0; // A
    double s_iref = 0.0; // 1/V
};

// V_X(i_f2, alpha) = F(alpha*i_f2) - F(i_f2); written with
// sqrt(1+x)-1 = x/(sqrt(1+x)+1) so the ratio inside the log stays finite
// down to arbitrarily small i_f2 (limit: ln alpha).
inline double scm_vx(double i_f2, double alpha, double T) {
    if (!(i_f2 > 0.0))
        throw domain_error("scm_vx: i_f2 must be positive");
    if (!(alpha > 1.0))
        throw domain_error("scm_vx: alpha must exceed 1");
    double sa = std::sqrt(1.0 + alpha * i_f2);
    double s1 = std::sqrt(1.0 + i_f2);
    double num = alpha * i_f2 / (sa + 1.0); // sqrt(1+a*i)-1
    double den = i_f2 / (s1 + 1.0);         // sqrt(1+i)-1
    return thermal_voltage(T) * ((sa - s1) + std::log(num / den));
}

// d V_X / d i_f2 at fixed alpha, from dF/di.
inline double scm_vx_deriv(double i_f2, double alpha, double T) {
    return alpha * acm_f_deriv(alpha * i_f2, T) - acm_f_deriv(i_f2, T);
}

// Inverse of scm_vx in i_f2. The infimum of V_X as i_f2 -> 0 is U_T ln alpha.
inline double scm_solve_if2(double v_x, double alpha, double T) {
    if (!(alpha > 1.0))
        throw domain_error("scm_solve_if2: alpha must exceed 1");
    double ut = thermal_voltage(T);
    if (!(v_x > ut * std::log(alpha)))
        throw domain_error("scm_solve_if2: v_x at or below the U_T*ln(alpha) infimum, no solution");
    double lo = 1e-12, hi = 1e9;
    while (scm_vx(hi, alpha, T) < v_x) {
        hi *= 1e3;
        if (hi > 1e300)
            throw convergence_error("scm_solve_if2: bracket overflow");
    }
    return detail::solve_increasing(
        [alpha, T](double i) { return scm_vx(i, alpha, T); },
        [alpha, T](double i) { return scm_vx_deriv(i, alpha, T); },
        v_x, lo, hi, 1e-12, 200, "scm_solve_if2");
}

inline double scm_s1_over_s2(double alpha, double N, double isq_ratio = 1.0) {
    if (!(alpha > 1.0))
        throw domain_error("scm_s1_over_s2: alpha must exceed 1");
    if (!(N >= 1.0))
        throw domain_error("scm_s1_over_s2: N must be >= 1");
    return isq_ratio * ((1.0 + N) / N) / (alpha - 1.0);
}

inline double reference_current(double isq2, double i_f2, double S2, double N) {
    return isq2 * i_f2 * S2 / N;
}

// S_IREF = (2/(i_f2 U_T)) * [alpha/(sqrt(1+alpha i_f2)-1) - 1/(sqrt(1+i_f2)-1)]^-1,
// the log-derivative of I_REF with respect to V_X at fixed T.
inline double sensitivity_siref(double i_f2, double alpha, double T) {
    if (!(i_f2 > 0.0))
        throw domain_error("sensitivity_siref: i_f2 must be positive");
    if (!(alpha > 1.0))
        throw domain_error("sensitivity_siref: alpha must exceed 1");
    double sa = std::sqrt(1.0 + alpha * i_f2);
    double s1 = std::sqrt(1.0 + i_f2);
    double ta = alpha / (alpha * i_f2 / (sa + 1.0));
    double t1 = 1.0 / (i_f2 / (s1 + 1.0));
    double bracket = ta - t1;
    if (bracket == 0.0)
        throw domain_error("sensitivity_siref: singular at alpha = 1");
    return (2.0 / (i_f2 * thermal_voltage(T))) / bracket;
}

inline double scm_gate_voltage(double i_f2, const FlavorParams& f, double T) {
    return f.vt0_at(T) + f.n * acm_f(i_f2, T);
}

} // namespace cref
