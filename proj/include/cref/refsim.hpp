#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cref/devmodel.hpp"
#include "cref/errors.hpp"
#include "cref/scm.hpp"
#include "cref/series.hpp"
#include "cref/vref4t.hpp"

namespace cref {

// Synthetic process corner: signed parameter deltas per flavor.
struct FlavorDelta {
    double vt0_shift = 0.0; // V
    double isq_scale = 1.0; // multiplier on both sheet currents
    double n_shift = 0.0;   // additive
};

struct Corner {
    std::string name = "nominal";
    std::map<std::string, FlavorDelta> deltas;

    TechnologyParams apply(const TechnologyParams& tech) const {
        TechnologyParams out = tech;
        for (const auto& [label, d] : deltas) {
            auto it = out.flavors.find(label);
            if (it == out.flavors.end())
                throw domain_error("corner '" + name + "': unknown flavor '" + label + "'");
            if (!(d.isq_scale > 0.0))
                throw domain_error("corner '" + name + "': isq_scale must be positive");
            FlavorParams& f = it->second;
            f.vt0 += d.vt0_shift;
            f.isq0_acm *= d.isq_scale;
            f.isq0_sub *= d.isq_scale;
            f.n += d.n_shift;
            if (!(f.n > 1.0))
                throw domain_error("corner '" + name + "': shifted n must exceed 1");
        }
        return out;
    }
};

struct CurrentReferenceDesign {
    VxModel vx_model;
    ScmDesign scm;
    std::optional<CalibrationConfig> cal;
    TechnologyParams tech;
    // Eq.-of-minimum-supply inputs, specified at T0 rather than solved.
    double vsg4 = 0.0;
    double vgs5 = 0.0;
    double vgs8 = 0.0;
};

struct BiasPoint {
    double T = 0.0;    // K
    double v_x = 0.0;  // V
    double i_f2 = 0.0;
    double i_ref = 0.0; // A
};

// Full bias solution per grid point; simulate_iref is the I_REF projection.
inline std::vector<BiasPoint> simulate_points(const CurrentReferenceDesign& design,
                                              const Corner& corner,
                                              const std::vector<double>& Ts) {
    design.scm.validate();
    TechnologyParams tech = corner.apply(design.tech);
    const FlavorParams& scm_flavor = tech.flavor(design.scm.flavor);
    std::vector<BiasPoint> out;
    out.reserve(Ts.size());
    for (double T : Ts) {
        BiasPoint p;
        p.T = T;
        try {
            p.v_x = vx_at(design.vx_model, tech, T);
            p.i_f2 = scm_solve_if2(p.v_x, design.scm.alpha, T);
        } catch (const domain_error& e) {
            std::ostringstream msg;
            msg << "simulate: unsolvable at T = " << T << " K: " << e.what();
            throw domain_error(msg.str());
        }
        p.i_ref = reference_current(isq_acm(scm_flavor, T), p.i_f2,
                                    design.scm.S2, design.scm.N);
        out.push_back(p);
    }
    return out;
}

inline TempSeries simulate_iref(const CurrentReferenceDesign& design,
                                const Corner& corner,
                                const std::vector<double>& Ts) {
    TempSeries s;
    for (const BiasPoint& p : simulate_points(design, corner, Ts))
        s.push(p.T, p.i_ref);
    return s;
}

struct VddMinResult {
    enum class Branch { ScmGate, MirrorPath, BufferPath };
    double value = 0.0; // V
    Branch limiting = Branch::ScmGate;

    const char* branch_name() const {
        switch (limiting) {
            case Branch::ScmGate: return "scm_gate";
            case Branch::MirrorPath: return "mirror_path";
            default: return "buffer_path";
        }
    }
};

// V_DD,min = 4 U_T + max(V_G, V_X + V_SG4, V_X + V_GS5 + V_GS8)
inline VddMinResult vdd_min(const CurrentReferenceDesign& design, double T) {
    double v_x = vx_at(design.vx_model, design.tech, T);
    double i_f2 = scm_solve_if2(v_x, design.scm.alpha, T);
    const FlavorParams& f = design.tech.flavor(design.scm.flavor);
    double v_g = scm_gate_voltage(i_f2, f, T);
    double mirror = v_x + design.vsg4;
    double buffer = v_x + design.vgs5 + design.vgs8;
    VddMinResult r;
    r.value = v_g;
    r.limiting = VddMinResult::Branch::ScmGate;
    if (mirror > r.value) {
        r.value = mirror;
        r.limiting = VddMinResult::Branch::MirrorPath;
    }
    if (buffer > r.value) {
        r.value = buffer;
        r.limiting = VddMinResult::Branch::BufferPath;
    }
    r.value += 4.0 * thermal_voltage(T);
    return r;
}

// Leakage of the voltage-reference branch: M7 and M9 drain currents at
// V_GS = 0 (M7's threshold carries the body-bias shift).
inline double vref_branch_current(const Vref4tDesign& d,
                                  const TechnologyParams& tech, double T) {
    const FlavorParams& f = tech.flavor(d.flavor679);
    double vt9 = f.vt0_at(T);
    double vt7 = f.vt0_at(T) + delta_vt7(d, tech, T);
    return subthreshold_current(f, d.s9, 0.0, vt9, T) +
           subthreshold_current(f, d.s7, 0.0, vt7, T);
}

// (N+1) I_REF + 4T branch current. When the bias model is the 4T reference
// and no override is supplied, the branch current is estimated internally.
inline double supply_current(const CurrentReferenceDesign& design, double T,
                             std::optional<double> i_vref = std::nullopt) {
    TempSeries s = simulate_iref(design, Corner{}, {T});
    double iref = s.samples.front().value;
    double branch = 0.0;
    if (i_vref) {
        branch = *i_vref;
    } else if (const auto* d = std::get_if<Vref4tDesign>(&design.vx_model)) {
        branch = vref_branch_current(*d, design.tech, T);
    } else {
        throw input_error("supply_current: i_vref required for the generic bias model");
    }
    return (design.scm.N + 1.0) * iref + branch;
}

struct CalibrationEntry {
    int code = 0;
    bool solvable = true;
    std::string note;
    double tc = 0.0;    // ppm/degC, valid when solvable
    double voff = 0.0;  // V at T0
    double slope = 0.0; // V/K of V_X
};

struct CalibrationResult {
    int best_code = 0;
    double best_tc = 0.0;
    std::vector<CalibrationEntry> per_code;
};

// Exhaustive code sweep; ties break toward the lower code. Unsolvable codes
// are recorded and skipped.
inline CalibrationResult calibrate_tc(const CurrentReferenceDesign& design,
                                      const Corner& corner,
                                      const std::vector<double>& Ts) {
    if (!design.cal)
        throw input_error("calibrate_tc: design has no calibration config");
    const auto* base = std::get_if<Vref4tDesign>(&design.vx_model);
    if (!base)
        throw input_error("calibrate_tc: calibration requires the 4T bias model");
    TechnologyParams corner_tech = corner.apply(design.tech);
    CalibrationResult result;
    bool any = false;
    for (int code = 0; code < design.cal->code_count(); ++code) {
        CalibrationEntry e;
        e.code = code;
        Vref4tDesign trimmed = apply_calibration(*base, *design.cal, code);
        CurrentReferenceDesign trial = design;
        trial.vx_model = trimmed;
        try {
            TempSeries s = simulate_iref(trial, corner, Ts);
            e.tc = tc_box(s);
            e.voff = voff(trimmed, corner_tech, design.tech.T0);
            TempSeries vx;
            for (double T : Ts) vx.push(T, vx_4t(trimmed, corner_tech, T));
            e.slope = ptat_slope(vx);
            if (!any || e.tc < result.best_tc) {
                result.best_code = code;
                result.best_tc = e.tc;
            }
            any = true;
        } catch (const std::runtime_error& err) {
            e.solvable = false;
            e.note = err.what();
        }
        result.per_code.push_back(e);
    }
    if (!any)
        throw domain_error("calibrate_tc: no solvable calibration code");
    return result;
}

} // namespace cref
