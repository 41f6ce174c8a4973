#pragma once

#include <cmath>
#include <map>
#include <string>

#include "cref/constants.hpp"
#include "cref/errors.hpp"
#include "cref/rootfind.hpp"

namespace cref {

// Body-effect model of the threshold shift Delta V_T(V_BS).
struct BodyModel {
    enum class Kind { Bulk, FdSoi };

    Kind kind = Kind::FdSoi;
    double gamma_b = 0.0;        // sqrt(V), Bulk only
    double phi_fp = 0.0;         // 2*phi_fp basis at T0 (V), Bulk only
    double phi_fp_tslope = 0.0;  // V/K, Bulk only
    double gamma_b_star = 0.0;   // dimensionless, FdSoi only

    static BodyModel bulk(double gamma_b, double two_phi_fp,
                          double phi_fp_tslope = 0.0) {
        if (!(gamma_b > 0.0) || !(two_phi_fp > 0.0))
            throw domain_error("BodyModel::bulk: gamma_b and 2*phi_fp must be positive");
        BodyModel b;
        b.kind = Kind::Bulk;
        b.gamma_b = gamma_b;
        b.phi_fp = two_phi_fp;
        b.phi_fp_tslope = phi_fp_tslope;
        return b;
    }

    static BodyModel fdsoi(double gamma_b_star) {
        if (!(gamma_b_star > 0.0 && gamma_b_star < 1.0))
            throw domain_error("BodyModel::fdsoi: gamma_b_star must be in (0, 1)");
        BodyModel b;
        b.kind = Kind::FdSoi;
        b.gamma_b_star = gamma_b_star;
        return b;
    }
};

// Per-flavor physical parameters. T0 is copied in from the owning technology
// so flavor-level operations stay self-contained.
struct FlavorParams {
    double n = 1.2;          // subthreshold slope factor
    double m = 1.5;          // mobility temperature exponent
    double isq0_acm = 0.0;   // specific sheet current at T0, I-V normalization (A)
    double isq0_sub = 0.0;   // specific sheet current at T0, exponential law (A)
    double vt0 = 0.0;        // threshold at zero V_BS and T0 (V)
    double vt0_tslope = 0.0; // dV_T0/dT (V/K)
    double T0 = default_T0;  // K
    BodyModel body;

    void validate(const std::string& label) const {
        if (!(n > 1.0))
            throw domain_error("flavor '" + label + "': n must exceed 1");
        if (!(m >= 1.0 && m <= 2.5))
            throw domain_error("flavor '" + label + "': m must lie in [1.0, 2.5]");
        if (!(isq0_acm > 0.0) || !(isq0_sub > 0.0))
            throw domain_error("flavor '" + label + "': isq0 values must be positive");
        if (!(T0 > 0.0))
            throw domain_error("flavor '" + label + "': T0 must be positive");
    }

    double vt0_at(double T) const { return vt0 + vt0_tslope * (T - T0); }
};

struct TechnologyParams {
    std::string name;
    double T0 = default_T0;
    std::map<std::string, FlavorParams> flavors;

    const FlavorParams& flavor(const std::string& label) const {
        auto it = flavors.find(label);
        if (it == flavors.end())
            throw domain_error("unknown flavor '" + label + "'");
        return it->second;
    }

    void add_flavor(const std::string& label, FlavorParams p) {
        p.T0 = T0;
        p.validate(label);
        flavors[label] = p;
    }

    void validate() const {
        if (!(T0 > 0.0))
            throw domain_error("technology: T0 must be positive");
        if (flavors.empty())
            throw domain_error("technology: at least one flavor required");
        for (const auto& [label, f] : flavors) f.validate(label);
    }
};

struct OperatingPoint {
    double i_f = 0.0; // forward inversion level
    double i_r = 0.0; // reverse inversion level, 0 when saturated
    double S = 1.0;   // aspect ratio W/L
};

// T^(2-m) power law shared by both sheet-current definitions.
inline double isq_power_law(double isq0, double m, double T, double T0) {
    if (!(T > 0.0))
        throw domain_error("isq: T must be positive (K)");
    return isq0 * std::pow(T / T0, 2.0 - m);
}

inline double isq_acm(const FlavorParams& f, double T) {
    return isq_power_law(f.isq0_acm, f.m, T, f.T0);
}

inline double isq_sub(const FlavorParams& f, double T) {
    return isq_power_law(f.isq0_sub, f.m, T, f.T0);
}

// F(i_f) = U_T * [sqrt(1+i_f) - 2 + ln(sqrt(1+i_f) - 1)].
// sqrt(1+i)-1 is computed as i/(sqrt(1+i)+1) to keep precision for small i.
inline double acm_f(double i_f, double T) {
    if (!(i_f > 0.0))
        throw domain_error("acm_f: i_f must be positive");
    double s = std::sqrt(1.0 + i_f);
    double sm1 = i_f / (s + 1.0);
    return thermal_voltage(T) * (s - 2.0 + std::log(sm1));
}

// dF/di_f = U_T / (2*(sqrt(1+i_f) - 1))
inline double acm_f_deriv(double i_f, double T) {
    double s = std::sqrt(1.0 + i_f);
    return thermal_voltage(T) / (2.0 * (i_f / (s + 1.0)));
}

// Numerical inverse of acm_f; F is strictly increasing on (0, inf) with full
// real range, so a solution always exists.
inline double acm_f_inverse(double v, double T) {
    if (!std::isfinite(v))
        throw domain_error("acm_f_inverse: v must be finite");
    double lo = 1e-12, hi = 1e7;
    while (acm_f(lo, T) > v) {
        lo *= 1e-3;
        if (lo < 1e-300)
            throw convergence_error("acm_f_inverse: bracket underflow");
    }
    while (acm_f(hi, T) < v) {
        hi *= 1e3;
        if (hi > 1e300)
            throw convergence_error("acm_f_inverse: bracket overflow");
    }
    return detail::solve_increasing(
        [T](double i) { return acm_f(i, T); },
        [T](double i) { return acm_f_deriv(i, T); },
        v, lo, hi, 1e-12, 200, "acm_f_inverse");
}

inline double acm_drain_current(const OperatingPoint& op, double isq) {
    return isq * op.S * (op.i_f - op.i_r);
}

// I_D = isq_sub(T) * S * exp((V_GS - V_T)/(n U_T)); valid for V_DS > 4 U_T,
// which is the caller's responsibility.
inline double subthreshold_current(const FlavorParams& f, double S, double V_GS,
                                   double V_T, double T) {
    return isq_sub(f, T) * S * std::exp((V_GS - V_T) / (f.n * thermal_voltage(T)));
}

inline double delta_vt(const BodyModel& body, double V_BS, double T,
                       double T0 = default_T0) {
    if (body.kind == BodyModel::Kind::FdSoi)
        return -body.gamma_b_star * V_BS;
    double two_phi = body.phi_fp + body.phi_fp_tslope * (T - T0);
    double arg = two_phi - V_BS;
    if (!(arg > 0.0) || !(two_phi > 0.0))
        throw domain_error("delta_vt: bulk square-root argument non-positive");
    return body.gamma_b * (std::sqrt(arg) - std::sqrt(two_phi));
}

inline double gamma_from_n(double n) {
    if (!(n > 1.0))
        throw domain_error("gamma_from_n: n must exceed 1");
    return n - 1.0;
}

} // namespace cref
