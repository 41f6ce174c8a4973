#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "cref/devmodel.hpp"
#include "cref/errors.hpp"
#include "cref/rootfind.hpp"
#include "cref/series.hpp"

namespace cref {

// 4-transistor voltage reference: M6/M7/M9 share one flavor, M8 has its own.
struct Vref4tDesign {
    double s6 = 1.0;
    double s7 = 0.0; // 0 permitted: degenerate pure-PTAT 2T case
    double s8 = 1.0;
    double s9 = 1.0;
    std::string flavor679;
    std::string flavor8;
    std::optional<double> vbs7_override; // fixed V_BS7 (V) for generic studies

    void validate() const {
        if (!(s6 > 0.0) || !(s8 > 0.0) || !(s9 > 0.0) || !(s7 >= 0.0))
            throw domain_error("Vref4tDesign: aspect ratios must be positive (s7 >= 0)");
    }
};

struct CalibrationConfig {
    enum class Target { TrimM9Slope, TrimM7Offset };

    Target target = Target::TrimM7Offset;
    double unit_aspect = 1.0; // aspect ratio of one unit finger
    int bits = 5;
    int base_units = 1; // always-on unit count

    int code_count() const { return 1 << bits; }

    void validate() const {
        if (bits < 1)
            throw domain_error("CalibrationConfig: bits must be >= 1");
        if (!(unit_aspect > 0.0))
            throw domain_error("CalibrationConfig: unit_aspect must be positive");
    }
};

// V_BS7 from the subthreshold balance of M8 and M9.
inline double vbs7(const Vref4tDesign& d, const TechnologyParams& tech, double T) {
    if (d.vbs7_override) return *d.vbs7_override;
    const FlavorParams& f9 = tech.flavor(d.flavor679);
    const FlavorParams& f8 = tech.flavor(d.flavor8);
    double arg = isq_sub(f9, T) * d.s9 / (isq_sub(f8, T) * d.s8);
    if (!(arg > 0.0))
        throw domain_error("vbs7: non-positive log argument");
    return (f8.n / f9.n * f8.vt0_at(T) - f9.vt0_at(T)) +
           f8.n * thermal_voltage(T) * std::log(arg);
}

// Threshold shift of M7 from its body bias.
inline double delta_vt7(const Vref4tDesign& d, const TechnologyParams& tech, double T) {
    const FlavorParams& f = tech.flavor(d.flavor679);
    return delta_vt(f.body, vbs7(d, tech, T), T, tech.T0);
}

// V_X = n U_T ln(S9/S6 + (S7/S6) exp(-dVT7/(n U_T)))
inline double vx_4t(const Vref4tDesign& d, const TechnologyParams& tech, double T) {
    d.validate();
    const FlavorParams& f = tech.flavor(d.flavor679);
    double nut = f.n * thermal_voltage(T);
    double dvt7 = delta_vt7(d, tech, T);
    return nut * std::log(d.s9 / d.s6 + (d.s7 / d.s6) * std::exp(-dvt7 / nut));
}

// CWT offset of V_X relative to the pure-PTAT n U_T ln(S9/S6) line, at T0.
inline double voff(const Vref4tDesign& d, const TechnologyParams& tech, double T0) {
    if (!(d.s9 > 0.0))
        throw domain_error("voff: s9 must be positive");
    const FlavorParams& f = tech.flavor(d.flavor679);
    double nut = f.n * thermal_voltage(T0);
    if (d.s7 == 0.0) return 0.0;
    double dvt7 = delta_vt7(d, tech, T0);
    return nut * std::log(1.0 + (d.s7 / d.s9) * std::exp(-dvt7 / nut));
}

// Finds the S9/S8 minimizing the box TC of vbs7 over [Tlo, Thi].
// Degenerate flat objectives (zero temperature coefficient of the flavor
// threshold difference) return 1 by the tie-break rule.
inline double size_s9_over_s8_for_cwt(const Vref4tDesign& d,
                                      const TechnologyParams& tech,
                                      double Tlo, double Thi) {
    if (!(Thi > Tlo))
        throw domain_error("size_s9_over_s8_for_cwt: Thi must exceed Tlo");
    const int n_samples = 9;
    auto objective = [&](double ratio) {
        Vref4tDesign trial = d;
        trial.vbs7_override.reset();
        trial.s8 = 1.0;
        trial.s9 = ratio;
        double lo = 0.0, hi = 0.0, sum = 0.0;
        for (int i = 0; i < n_samples; ++i) {
            double T = Tlo + (Thi - Tlo) * i / (n_samples - 1);
            double v = vbs7(trial, tech, T);
            if (i == 0) { lo = hi = v; }
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        double mean = std::abs(sum / n_samples);
        return (hi - lo) / (std::max(mean, 1e-12) * (Thi - Tlo)) * 1e6;
    };
    double flat_probe = objective(2.0);
    bool flat = true;
    for (double r : {0.1, 0.5, 10.0, 100.0})
        if (std::abs(objective(r) - flat_probe) > 1e-9 * (1.0 + flat_probe)) {
            flat = false;
            break;
        }
    if (flat) return 1.0;
    double u = detail::golden_min(
        [&](double lu) { return objective(std::exp(lu)); },
        std::log(0.1), std::log(100.0), 1e-10, 200, "size_s9_over_s8_for_cwt");
    return std::exp(u);
}

inline Vref4tDesign apply_calibration(const Vref4tDesign& d,
                                      const CalibrationConfig& cal, int code) {
    cal.validate();
    if (code < 0 || code >= cal.code_count())
        throw input_error("apply_calibration: code out of range");
    Vref4tDesign out = d;
    double s = (cal.base_units + code) * cal.unit_aspect;
    if (cal.target == CalibrationConfig::Target::TrimM9Slope)
        out.s9 = s;
    else
        out.s7 = s;
    return out;
}

// Generic bias abstraction: a PTAT voltage with a CWT offset.
struct GenericVx {
    double v_off = 0.0;  // V at T0
    double k_ptat = 8.0; // dimensionless, > 1
    double n = 1.2;

    void validate() const {
        if (!(k_ptat > 1.0))
            throw domain_error("GenericVx: k_ptat must exceed 1");
        if (!(v_off >= 0.0))
            throw domain_error("GenericVx: v_off must be non-negative");
    }
};

inline double vx_generic(const GenericVx& g, double T) {
    g.validate();
    return g.v_off + g.n * thermal_voltage(T) * std::log(g.k_ptat);
}

using VxModel = std::variant<GenericVx, Vref4tDesign>;

inline double vx_at(const VxModel& model, const TechnologyParams& tech, double T) {
    if (const auto* g = std::get_if<GenericVx>(&model)) return vx_generic(*g, T);
    return vx_4t(std::get<Vref4tDesign>(model), tech, T);
}

} // namespace cref
