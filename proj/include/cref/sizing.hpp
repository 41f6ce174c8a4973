#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cref/devmodel.hpp"
#include "cref/errors.hpp"
#include "cref/refsim.hpp"
#include "cref/scm.hpp"
#include "cref/series.hpp"
#include "cref/vref4t.hpp"

namespace cref {

inline std::vector<double> default_temp_grid() {
    std::vector<double> Ts;
    for (int t = -40; t <= 85; t += 5) Ts.push_back(celsius_to_kelvin(t));
    return Ts;
}

struct SizingInputs {
    double i_ref_target = 2.5e-9; // A at T0
    double N = 3.0;
    double s7_over_s6 = 2.0;
    double s9_over_s6 = 8.0;
    std::pair<double, double> alpha_range{1.05, 3.0};
    double alpha_step = 0.025;
    std::vector<double> row_values; // s9/s6 (or k_ptat) grid rows; default 2..16
    TechnologyParams tech;
    std::string scm_flavor;
    std::string flavor679;
    std::string flavor8;
    std::string mirror_flavor;
    std::string buffer_flavor;
    double isq_ratio = 1.0;
    double if_mirror = 10.0; // target inversion level of M3/M4
    double if_buffer = 10.0; // target inversion level of M5
    std::optional<double> vbs7_override;
    // When set, the bias is the PTAT-plus-offset abstraction with
    // k_ptat taken from the row value instead of the 4T reference.
    std::optional<GenericVx> generic;

    void validate() const {
        if (!(i_ref_target > 0.0))
            throw domain_error("SizingInputs: i_ref_target must be positive");
        if (!(alpha_range.first > 1.0 && alpha_range.second <= 4.0 &&
              alpha_range.second > alpha_range.first))
            throw domain_error("SizingInputs: alpha_range must lie within (1, 4]");
        if (!(alpha_step > 0.0))
            throw domain_error("SizingInputs: alpha_step must be positive");
    }

    std::vector<double> rows() const {
        if (!row_values.empty()) return row_values;
        std::vector<double> r;
        for (int v = 2; v <= 16; ++v) r.push_back(v);
        return r;
    }

    std::vector<double> alphas() const {
        std::vector<double> a;
        for (double x = alpha_range.first; x <= alpha_range.second + 1e-12;
             x += alpha_step)
            a.push_back(x);
        return a;
    }
};

struct ConstraintCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0; // value - 4 U_T, volts
};

struct SizingReport {
    double alpha_opt = 0.0;
    double tc_analytic = 0.0; // ppm/degC
    double s_iref = 0.0;      // 1/V
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0, s5 = 0.0;
    double vx_t0 = 0.0;
    double if1 = 0.0, if2 = 0.0;
    bool final_stage = false;
    std::vector<ConstraintCheck> constraint_checks;
};

namespace detail {

inline Vref4tDesign sizing_vref_design(const SizingInputs& in, double s9_over_s6) {
    Vref4tDesign d;
    d.s6 = 1.0;
    d.s7 = in.s7_over_s6;
    d.s9 = s9_over_s6;
    d.s8 = 1.0;
    d.flavor679 = in.flavor679;
    d.flavor8 = in.flavor8;
    d.vbs7_override = in.vbs7_override;
    return d;
}

inline VxModel sizing_vx_model(const SizingInputs& in, double row_value) {
    if (in.generic) {
        GenericVx g = *in.generic;
        g.k_ptat = row_value;
        return g;
    }
    Vref4tDesign d = sizing_vref_design(in, row_value);
    if (!d.vbs7_override) {
        double ratio = size_s9_over_s8_for_cwt(
            d, in.tech, celsius_to_kelvin(-40.0), celsius_to_kelvin(85.0));
        d.s8 = d.s9 / ratio;
    }
    return d;
}

inline CurrentReferenceDesign sizing_sim_design(const SizingInputs& in,
                                                double row_value, double alpha) {
    CurrentReferenceDesign design;
    design.vx_model = sizing_vx_model(in, row_value);
    design.scm.alpha = alpha;
    design.scm.N = in.N;
    design.scm.S2 = 1.0; // TC is independent of the current scale
    design.scm.isq_ratio = in.isq_ratio;
    design.scm.flavor = in.scm_flavor;
    design.tech = in.tech;
    return design;
}

} // namespace detail

// Step 1: size the voltage reference (S6 normalized to 1) and report V_X(T0).
// S8 comes from the CWT sizing of V_BS7 unless an override pins V_BS7.
inline std::pair<Vref4tDesign, double> step1_vref(const SizingInputs& in) {
    in.validate();
    Vref4tDesign d = detail::sizing_vref_design(in, in.s9_over_s6);
    if (!d.vbs7_override) {
        double ratio = size_s9_over_s8_for_cwt(
            d, in.tech, celsius_to_kelvin(-40.0), celsius_to_kelvin(85.0));
        d.s8 = d.s9 / ratio;
    }
    return {d, vx_4t(d, in.tech, in.tech.T0)};
}

struct TcMap {
    std::vector<double> rows;   // s9/s6 or k_ptat values
    std::vector<double> alphas;
    std::vector<std::vector<std::optional<double>>> tc; // [row][alpha]
};

struct AlphaGuess {
    double alpha = 0.0;
    double tc = 0.0; // ppm/degC at the guess
    TcMap map;
};

// Step 2: analytic TC map over the (row, alpha) grid; the guess is the alpha
// minimizing TC on the requested row. Unsolvable cells stay absent.
inline AlphaGuess step2_alpha_guess(const SizingInputs& in,
                                    const std::vector<double>& Ts) {
    in.validate();
    AlphaGuess out;
    out.map.rows = in.rows();
    out.map.alphas = in.alphas();
    bool found = false;
    double requested = in.generic ? in.generic->k_ptat : in.s9_over_s6;
    for (double row : out.map.rows) {
        std::vector<std::optional<double>> line;
        for (double alpha : out.map.alphas) {
            std::optional<double> cell;
            try {
                CurrentReferenceDesign d = detail::sizing_sim_design(in, row, alpha);
                cell = tc_box(simulate_iref(d, Corner{}, Ts));
            } catch (const std::runtime_error&) {
            }
            line.push_back(cell);
            if (cell && row == requested && (!found || *cell < out.tc)) {
                out.alpha = alpha;
                out.tc = *cell;
                found = true;
            }
        }
        out.map.tc.push_back(std::move(line));
    }
    if (!found)
        throw domain_error("step2_alpha_guess: no solvable cell on the requested row");
    return out;
}

// Step 3: aspect ratios from the solved bias point at T0.
inline SizingReport step3_aspect_ratios(const SizingInputs& in, double vx_t0,
                                        double alpha) {
    in.validate();
    double T0 = in.tech.T0;
    double ut0 = thermal_voltage(T0);
    if (!(vx_t0 > ut0 * std::log(alpha)))
        throw domain_error("step3_aspect_ratios: vx_t0 at or below U_T*ln(alpha), no bias solution");
    SizingReport rep;
    rep.alpha_opt = alpha;
    rep.vx_t0 = vx_t0;
    rep.if2 = scm_solve_if2(vx_t0, alpha, T0);
    rep.if1 = alpha * rep.if2;
    rep.s_iref = sensitivity_siref(rep.if2, alpha, T0);
    const FlavorParams& scm_f = in.tech.flavor(in.scm_flavor);
    rep.s2 = in.N * in.i_ref_target / (isq_acm(scm_f, T0) * rep.if2);
    rep.s1 = rep.s2 * scm_s1_over_s2(alpha, in.N, in.isq_ratio);

    const FlavorParams& mirror_f = in.tech.flavor(in.mirror_flavor);
    rep.s4 = in.i_ref_target / (isq_acm(mirror_f, T0) * in.if_mirror);
    rep.s3 = in.N * rep.s4;
    double vsg4 = scm_gate_voltage(in.if_mirror, mirror_f, T0);
    rep.constraint_checks.push_back(
        {"V_SG4 > 4U_T", vsg4 - 4.0 * ut0 > 0.0, vsg4 - 4.0 * ut0});

    const FlavorParams& buffer_f = in.tech.flavor(in.buffer_flavor);
    rep.s5 = in.i_ref_target / (isq_acm(buffer_f, T0) * in.if_buffer);
    double vgs5 = scm_gate_voltage(in.if_buffer, buffer_f, T0);
    double vy = vx_t0 + vgs5;
    rep.constraint_checks.push_back(
        {"V_Y = V_X + V_GS5 > 4U_T", vy - 4.0 * ut0 > 0.0, vy - 4.0 * ut0});

    double row = in.generic ? in.generic->k_ptat : in.s9_over_s6;
    CurrentReferenceDesign sim = detail::sizing_sim_design(in, row, alpha);
    rep.tc_analytic = tc_box(simulate_iref(sim, Corner{}, default_temp_grid()));
    return rep;
}

// Step 4: rerun step 3 at an externally refined alpha; tagged final.
inline SizingReport step4_finalize(const SizingInputs& in, double alpha_sim) {
    double vx_t0;
    if (in.generic) {
        vx_t0 = vx_generic(*in.generic, in.tech.T0);
    } else {
        vx_t0 = step1_vref(in).second;
    }
    SizingReport rep = step3_aspect_ratios(in, vx_t0, alpha_sim);
    rep.final_stage = true;
    return rep;
}

struct TcCurvePoint {
    double alpha = 0.0;
    double s2_over_s1 = 0.0;
    std::optional<double> tc; // ppm/degC, absent when unsolvable
};

// Analytic TC as a function of S2/S1 (a proxy for alpha) on the requested row.
inline std::vector<TcCurvePoint> tc_vs_s2_over_s1(const SizingInputs& in,
                                                  const std::vector<double>& Ts) {
    in.validate();
    double row = in.generic ? in.generic->k_ptat : in.s9_over_s6;
    std::vector<TcCurvePoint> curve;
    for (double alpha : in.alphas()) {
        TcCurvePoint p;
        p.alpha = alpha;
        p.s2_over_s1 = 1.0 / scm_s1_over_s2(alpha, in.N, in.isq_ratio);
        try {
            CurrentReferenceDesign d = detail::sizing_sim_design(in, row, alpha);
            p.tc = tc_box(simulate_iref(d, Corner{}, Ts));
        } catch (const std::runtime_error&) {
        }
        curve.push_back(p);
    }
    return curve;
}

} // namespace cref
