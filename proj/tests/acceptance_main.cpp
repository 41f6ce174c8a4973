// Acceptance gate: one PASS/FAIL line per criterion, exit code is the
// number of failed criteria.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cref/cref.hpp"
#include "fixtures.hpp"

namespace {

int failures = 0;

void report(int idx, const char* what, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", idx, what,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c, d);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
// Bias-abstraction design map: the TC minimum over the (K, alpha) grid must
// sit within one grid cell of (K = 8, alpha = 1.5), and the reference current
// at the found optimum must stay within +/-2 % of its 25 degC value.
void criterion1() {
    cref::SizingInputs in;
    in.tech = fixtures::fdsoi_generic(1.2, 1.5);
    in.scm_flavor = "gen";
    in.generic = cref::GenericVx{0.02, 8.0, 1.2};
    in.alpha_range = {1.1, 2.5};
    in.alpha_step = 0.025;
    auto Ts = fixtures::default_grid();

    double best_tc = 0.0, best_row = 0.0, best_alpha = 0.0;
    bool found = false;
    for (double row : in.rows()) {
        for (double alpha : in.alphas()) {
            cref::SizingInputs cell = in;
            cell.generic->k_ptat = row;
            try {
                auto d = cref::detail::sizing_sim_design(cell, row, alpha);
                double tc = cref::tc_box(cref::simulate_iref(d, cref::Corner{}, Ts));
                if (!found || tc < best_tc) {
                    best_tc = tc;
                    best_row = row;
                    best_alpha = alpha;
                    found = true;
                }
            } catch (const std::runtime_error&) {
            }
        }
    }

    bool location_ok = found && std::abs(best_row - 8.0) <= 1.0 + 1e-12 &&
                       std::abs(best_alpha - 1.5) <= 0.025 + 1e-12;

    bool flat_ok = false;
    double spread = 0.0;
    if (found) {
        cref::SizingInputs cell = in;
        cell.generic->k_ptat = best_row;
        auto d = cref::detail::sizing_sim_design(cell, best_row, best_alpha);
        auto pts = cref::simulate_points(d, cref::Corner{}, Ts);
        double at25 = 0.0;
        for (const auto& p : pts)
            if (std::abs(p.T - cref::celsius_to_kelvin(25.0)) < 1e-9) at25 = p.i_ref;
        double worst = 0.0;
        for (const auto& p : pts)
            worst = std::max(worst, std::abs(p.i_ref / at25 - 1.0));
        spread = worst;
        flat_ok = worst <= 0.02;
    }

    report(1, "design-map optimum location and flatness",
           location_ok && flat_ok,
           fmt("min TC %.4g ppm/degC at (K=%g, alpha=%g), |dI/I| max %.4g",
               best_tc, best_row, best_alpha, spread));
}

// ---------------------------------------------------------------- criterion 2
// Composite fixture: box TC at alpha = 1.825 must land at 96.7 +/- 15
// ppm/degC, and the TC-vs-S2/S1 curve must bottom out at S2/S1 = 0.62 +/- 0.05.
void criterion2() {
    cref::TechnologyParams tech = fixtures::fdsoi_generic(1.21, 1.63);
    cref::Vref4tDesign vref = fixtures::pinned_vref(tech, 2.0, 8.0, -3.3926062100e-02);
    auto Ts = fixtures::default_grid();

    cref::CurrentReferenceDesign d;
    d.tech = tech;
    d.vx_model = vref;
    d.scm.alpha = 1.825;
    d.scm.N = 3.0;
    d.scm.S2 = 1.0;
    d.scm.flavor = "gen";
    double tc = cref::tc_box(cref::simulate_iref(d, cref::Corner{}, Ts));
    bool tc_ok = std::abs(tc - 96.7) <= 15.0;

    cref::SizingInputs in;
    in.tech = tech;
    in.scm_flavor = "gen";
    in.flavor679 = "gen";
    in.flavor8 = "gen";
    in.s7_over_s6 = 2.0;
    in.s9_over_s6 = 8.0;
    in.vbs7_override = vref.vbs7_override;
    in.alpha_range = {1.05, 3.0};
    auto curve = cref::tc_vs_s2_over_s1(in, Ts);
    double best_ratio = 0.0, best_tc = 0.0;
    bool found = false;
    for (const auto& p : curve) {
        if (p.tc && (!found || *p.tc < best_tc)) {
            best_tc = *p.tc;
            best_ratio = p.s2_over_s1;
            found = true;
        }
    }
    bool ratio_ok = found && std::abs(best_ratio - 0.62) <= 0.05;

    report(2, "composite-fixture TC level and S2/S1 optimum", tc_ok && ratio_ok,
           fmt("TC(alpha=1.825) = %.4g ppm/degC, curve min %.4g at S2/S1 = %.4g",
               tc, best_tc, best_ratio));
}

// ---------------------------------------------------------------- criterion 3
// Offset tunability: sweeping S7/S6 over [0.5, 15] must cover [5, 55] mV of
// offset monotonically; the PTAT slope must grow monotonically with S9/S6 and
// stay inside [0.08, 0.35] mV/degC.
void criterion3() {
    cref::TechnologyParams tech = fixtures::fdsoi_generic();
    const double dvt7 = -0.030;

    bool voff_mono = true;
    double voff_lo = 0.0, voff_hi = 0.0, prev = -1.0;
    for (int i = 0; i <= 29; ++i) {
        double s7 = 0.5 * std::pow(30.0, i / 29.0); // 0.5 .. 15 log-spaced
        cref::Vref4tDesign d = fixtures::pinned_vref(tech, s7, 8.0, dvt7);
        double v = cref::voff(d, tech, tech.T0);
        if (i == 0) voff_lo = v;
        if (i == 29) voff_hi = v;
        if (v <= prev) voff_mono = false;
        prev = v;
    }
    bool voff_ok = voff_mono && voff_lo <= 5e-3 && voff_hi >= 55e-3;

    bool slope_mono = true, slope_band = true;
    double prev_slope = -1.0;
    for (double s9 : {2.0, 4.0, 8.0, 16.0}) {
        cref::Vref4tDesign d = fixtures::pinned_vref(tech, 2.0, s9, dvt7);
        cref::TempSeries vx;
        for (double T : fixtures::default_grid())
            vx.push(T, cref::vx_4t(d, tech, T));
        double s = cref::ptat_slope(vx); // V/K == mV/mdegC
        if (s <= prev_slope) slope_mono = false;
        if (s < 0.08e-3 || s > 0.35e-3) slope_band = false;
        prev_slope = s;
    }

    report(3, "offset coverage and PTAT-slope tunability",
           voff_ok && slope_mono && slope_band,
           fmt("voff %.4g..%.4g V, slope %.4g..%.4g mV/degC", voff_lo, voff_hi,
               0.0, prev_slope * 1e3));
}

// ---------------------------------------------------------------- criterion 4
// Figure-of-merit arithmetic reproduces the published survey values to the
// printed precision, and the best (lowest) FoM belongs to the 22-nm entry.
void criterion4() {
    struct Row {
        const char* label;
        double tc, t_min, t_max, area, printed_fom;
    };
    const Row rows[] = {
        {"far-2015", 20, 0, 70, 0.0102, 0.0029},
        {"cordova-2017", 108, -20, 120, 0.01, 0.0077},
        {"santamaria-2019", 309, -40, 125, 0.0093, 0.0174},
        {"de-vita-2007", 44, 0, 80, 0.035, 0.0193},
        {"lee-2020", 289, -20, 80, 0.332, 0.9595},
        {"lefebvre-2023", 565, -40, 85, 0.0132, 0.0597},
        {"scm4t-011um", 176, -40, 85, 0.0106, 0.0149},
        {"scm4t-22nm", 82, -40, 85, 0.00255, 0.0017},
    };
    bool all_ok = true;
    double best = 1e30;
    const char* best_label = "";
    std::string detail;
    for (const Row& r : rows) {
        cref::ReferenceRecord rec;
        rec.label = r.label;
        rec.tc = r.tc;
        rec.t_min = r.t_min;
        rec.t_max = r.t_max;
        rec.area = r.area;
        double f = cref::fom(rec);
        if (std::abs(f - r.printed_fom) > 5.1e-5) {
            all_ok = false;
            detail += std::string(r.label) + fmt(": %.6g vs %.4g; ", f, r.printed_fom);
        }
        if (f < best) {
            best = f;
            best_label = r.label;
        }
    }
    bool order_ok = std::strcmp(best_label, "scm4t-22nm") == 0;
    report(4, "survey figure-of-merit arithmetic", all_ok && order_ok,
           detail + fmt("best FoM %.4g (", best) + best_label + ")");
}

// ---------------------------------------------------------------- criterion 5
// One 5-bit trim code per process corner restores the TC: the calibrated TC
// never exceeds the fixed-code TC, and the worst calibrated corner stays
// below half the worst fixed-code corner.
void criterion5() {
    cref::CurrentReferenceDesign d = fixtures::design22();
    auto Ts = fixtures::default_grid();
    const int nominal_code = fixtures::design22_nominal_code();

    std::vector<cref::Corner> corners(5);
    corners[0].name = "nominal";
    corners[1].name = "n-fast";
    corners[1].deltas["slvt"].n_shift = 0.05;
    corners[2].name = "n-slow";
    corners[2].deltas["slvt"].n_shift = -0.05;
    corners[3].name = "vt8-high";
    corners[3].deltas["lvt"].vt0_shift = 0.020;
    corners[4].name = "vt8-low";
    corners[4].deltas["lvt"].vt0_shift = -0.020;

    bool each_ok = true;
    double worst_fixed = 0.0, worst_cal = 0.0;
    for (const auto& c : corners) {
        cref::CalibrationResult r = cref::calibrate_tc(d, c, Ts);
        const cref::CalibrationEntry& fixed = r.per_code.at(nominal_code);
        if (!fixed.solvable || r.best_tc > fixed.tc + 1e-9) each_ok = false;
        worst_fixed = std::max(worst_fixed, fixed.tc);
        worst_cal = std::max(worst_cal, r.best_tc);
    }
    bool half_ok = worst_cal < 0.5 * worst_fixed;

    report(5, "per-corner trim recovery", each_ok && half_ok,
           fmt("worst fixed-code TC %.4g, worst calibrated TC %.4g ppm/degC",
               worst_fixed, worst_cal));
}

// ---------------------------------------------------------------- criterion 6
// Randomized property sweeps (>= 50 cases each): inversion-function round
// trip, bias-solve identity, sensitivity vs finite difference, current scale
// invariance, and deterministic numeric formatting.
void criterion6() {
    std::mt19937 rng(0xC0FFEE);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int bad = 0;
    std::string first;

    auto fail = [&](const std::string& what) {
        ++bad;
        if (first.empty()) first = what;
    };

    for (int k = 0; k < 60; ++k) {
        double i = std::pow(10.0, -6.0 + 10.0 * u01(rng));
        double T = 220.0 + 160.0 * u01(rng);
        double back = cref::acm_f_inverse(cref::acm_f(i, T), T);
        if (std::abs(back - i) > 1e-8 * i) fail(fmt("inverse round trip at i=%g", i));
    }

    for (int k = 0; k < 60; ++k) {
        double alpha = 1.05 + 1.95 * u01(rng);
        double i = std::pow(10.0, -3.0 + 6.0 * u01(rng));
        double T = 220.0 + 160.0 * u01(rng);
        double vx = cref::scm_vx(i, alpha, T);
        double back = cref::scm_solve_if2(vx, alpha, T);
        if (std::abs(back - i) > 1e-7 * i)
            fail(fmt("bias solve identity at alpha=%g, i=%g", alpha, i));
    }

    for (int k = 0; k < 60; ++k) {
        double alpha = 1.1 + 1.9 * u01(rng);
        double i = std::pow(10.0, -1.0 + 4.0 * u01(rng));
        double T = 250.0 + 100.0 * u01(rng);
        double vx = cref::scm_vx(i, alpha, T);
        double h = 1e-7;
        double ip = cref::scm_solve_if2(vx + h, alpha, T);
        double im = cref::scm_solve_if2(vx - h, alpha, T);
        double fd = (std::log(ip) - std::log(im)) / (2.0 * h);
        double s = cref::sensitivity_siref(i, alpha, T);
        if (std::abs(fd - s) > 1e-4 * std::abs(s))
            fail(fmt("sensitivity vs FD at alpha=%g, i=%g", alpha, i));
    }

    for (int k = 0; k < 60; ++k) {
        double isq = std::pow(10.0, -8.0 + 2.0 * u01(rng));
        double i = std::pow(10.0, -2.0 + 5.0 * u01(rng));
        double s2 = std::pow(10.0, -4.0 + 3.0 * u01(rng));
        double N = 1.0 + 7.0 * u01(rng);
        double c = std::pow(10.0, -2.0 + 4.0 * u01(rng));
        double a = cref::reference_current(isq, i, s2 * c, N);
        double b = cref::reference_current(isq, i, s2, N);
        if (std::abs(a / b - c) > 1e-12 * c) fail("current scale invariance");
    }

    for (int k = 0; k < 60; ++k) {
        double v = (u01(rng) - 0.5) * std::pow(10.0, -12.0 + 24.0 * u01(rng));
        std::string s1 = cref::format_g(v);
        std::string s2 = cref::format_g(v);
        double back = std::strtod(s1.c_str(), nullptr);
        if (s1 != s2) fail("formatting not deterministic");
        else if (v != 0.0 && std::abs(back - v) > 1e-8 * std::abs(v))
            fail("formatting loses precision: " + s1);
    }

    report(6, "randomized property sweeps", bad == 0,
           bad == 0 ? "300 cases" : fmt("%g failing cases, first: ", bad) + first);
}

// ---------------------------------------------------------------- criterion 7
// Pure-PTAT bias: the inversion level is temperature-independent and the box
// TC reduces to the sheet-current power law (2 - m) / T_mean.
void criterion7() {
    bool ok = true;
    std::string detail;
    auto Ts = fixtures::default_grid();
    for (double m : {1.2, 1.5, 2.0}) {
        cref::CurrentReferenceDesign d;
        d.tech = fixtures::fdsoi_generic(1.2, m);
        d.vx_model = cref::GenericVx{0.0, 8.0, 1.2};
        d.scm.alpha = 1.5;
        d.scm.N = 3.0;
        d.scm.S2 = 1e-3;
        d.scm.flavor = "gen";
        auto pts = cref::simulate_points(d, cref::Corner{}, Ts);
        double if_lo = pts.front().i_f2, if_hi = pts.front().i_f2;
        cref::TempSeries s;
        double t_sum = 0.0;
        for (const auto& p : pts) {
            if_lo = std::min(if_lo, p.i_f2);
            if_hi = std::max(if_hi, p.i_f2);
            s.push(p.T, p.i_ref);
            t_sum += p.T;
        }
        double tc = cref::tc_box(s);
        double analytic = (2.0 - m) / (t_sum / pts.size()) * 1e6;
        bool tc_ok = m == 2.0 ? std::abs(tc) < 1.0
                              : std::abs(tc - analytic) <= 0.10 * analytic;
        bool if_ok = if_hi / if_lo - 1.0 < 0.02;
        if (!(tc_ok && if_ok)) ok = false;
        detail += fmt("m=%g: TC %.4g (power-law %.4g); ", m, tc, analytic);
    }
    report(7, "pure-PTAT power-law limit", ok, detail);
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    std::printf("%d of 7 criteria failed\n", failures);
    return failures;
}
