#pragma once

// Shared technology and design fixtures for the test suite.

#include <cmath>

#include "cref/cref.hpp"

namespace fixtures {

// Single-flavor FD-SOI-style technology for bias-abstraction studies.
inline cref::TechnologyParams fdsoi_generic(double n = 1.2, double m = 1.5,
                                            double gamma_b_star = 0.15) {
    cref::TechnologyParams tech;
    tech.name = "fdsoi-generic";
    tech.T0 = 298.15;
    cref::FlavorParams f;
    f.n = n;
    f.m = m;
    f.isq0_acm = 100e-9;
    f.isq0_sub = 2e-9;
    f.vt0 = 0.45;
    f.vt0_tslope = 0.0;
    f.body = cref::BodyModel::fdsoi(gamma_b_star);
    tech.add_flavor("gen", f);
    return tech;
}

// 4T design with a pinned V_BS7 chosen to produce the requested constant
// threshold shift on M7 (FD-SOI body: delta = -gamma_b_star * V_BS7).
inline cref::Vref4tDesign pinned_vref(const cref::TechnologyParams& tech,
                                      double s7_over_s6, double s9_over_s6,
                                      double delta_vt7) {
    cref::Vref4tDesign d;
    d.s6 = 1.0;
    d.s7 = s7_over_s6;
    d.s8 = 1.0;
    d.s9 = s9_over_s6;
    d.flavor679 = "gen";
    d.flavor8 = "gen";
    double g = tech.flavor("gen").body.gamma_b_star;
    d.vbs7_override = -delta_vt7 / g;
    return d;
}

// Threshold shift reproducing a requested V_X offset at T0 for given
// S7/S6 and S9/S7 ratios (inverse of the offset expression).
inline double delta_vt7_for_voff(double voff_target, double n, double T0,
                                 double s9_over_s7) {
    double nut = n * cref::thermal_voltage(T0);
    return -nut * std::log((std::exp(voff_target / nut) - 1.0) * s9_over_s7);
}

// Two-flavor 22-nm-style technology: slvt for M6/M7/M9 and the SCM,
// lvt for M8. The threshold slopes make V_BS7 flat at S9/S8 = 4.38.
inline cref::TechnologyParams tech22() {
    cref::TechnologyParams tech;
    tech.name = "soi22-style";
    tech.T0 = 298.15;
    cref::FlavorParams slvt;
    slvt.n = 1.21;
    slvt.m = 1.63;
    slvt.isq0_acm = 100e-9;
    slvt.isq0_sub = 2e-9;
    slvt.vt0 = 0.30;
    slvt.vt0_tslope = -0.6e-3;
    slvt.body = cref::BodyModel::fdsoi(0.21);
    tech.add_flavor("slvt", slvt);
    cref::FlavorParams lvt;
    lvt.n = 1.30;
    lvt.m = 1.63;
    lvt.isq0_acm = 100e-9;
    lvt.isq0_sub = 2e-9;
    lvt.vt0 = 0.40829;
    lvt.vt0_tslope = -7.1246e-4;
    lvt.body = cref::BodyModel::fdsoi(0.30);
    tech.add_flavor("lvt", lvt);
    return tech;
}

// Calibratable 22-nm-style composite design: 5-bit offset trim on M7,
// nominal code 16, alpha = 1.3.
inline cref::CurrentReferenceDesign design22() {
    cref::CurrentReferenceDesign d;
    d.tech = tech22();
    cref::Vref4tDesign v;
    v.s6 = 1.0;
    v.s8 = 8.0 / 4.38;
    v.s9 = 8.0;
    v.flavor679 = "slvt";
    v.flavor8 = "lvt";
    cref::CalibrationConfig cal;
    cal.target = cref::CalibrationConfig::Target::TrimM7Offset;
    cal.unit_aspect = 1.05 / 17.0;
    cal.bits = 5;
    cal.base_units = 1;
    v.s7 = (cal.base_units + 16) * cal.unit_aspect; // nominal code 16
    d.vx_model = v;
    d.cal = cal;
    d.scm.alpha = 1.3;
    d.scm.N = 3.0;
    d.scm.S2 = 2e-3;
    d.scm.flavor = "slvt";
    return d;
}

inline int design22_nominal_code() { return 16; }

// Two-flavor bulk-style technology; threshold slopes put the flat-V_BS7
// sizing optimum near S9/S8 = 3.
inline cref::TechnologyParams bulk011() {
    cref::TechnologyParams tech;
    tech.name = "bulk011-style";
    tech.T0 = 298.15;
    cref::FlavorParams hs;
    hs.n = 1.25;
    hs.m = 1.5;
    hs.isq0_acm = 120e-9;
    hs.isq0_sub = 2e-9;
    hs.vt0 = 0.45;
    hs.vt0_tslope = -0.9e-3;
    hs.body = cref::BodyModel::bulk(0.4, 0.8);
    tech.add_flavor("hs", hs);
    cref::FlavorParams hvt;
    hvt.n = 1.32;
    hvt.m = 1.5;
    hvt.isq0_acm = 120e-9;
    hvt.isq0_sub = 2e-9;
    hvt.vt0 = 0.55;
    hvt.vt0_tslope = -9.706e-4;
    hvt.body = cref::BodyModel::bulk(0.4, 0.8);
    tech.add_flavor("hvt", hvt);
    return tech;
}

inline std::vector<double> default_grid() { return cref::default_temp_grid(); }

} // namespace fixtures
