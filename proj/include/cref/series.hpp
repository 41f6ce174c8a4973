#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "cref/errors.hpp"

namespace cref {

// Sampled (T, value) series; T in kelvin, strictly increasing.
struct TempSeries {
    struct Sample {
        double T = 0.0;
        double value = 0.0;
    };
    std::vector<Sample> samples;

    void push(double T, double value) { samples.push_back({T, value}); }
    std::size_t size() const { return samples.size(); }

    void validate() const {
        if (samples.size() < 2)
            throw input_error("TempSeries: at least 2 samples required");
        for (std::size_t i = 1; i < samples.size(); ++i)
            if (!(samples[i].T > samples[i - 1].T))
                throw input_error("TempSeries: temperatures must be strictly increasing");
    }
};

// Box-method temperature coefficient, ppm per unit of T span.
// The denominator uses the arithmetic mean of all samples.
inline double tc_box(const TempSeries& s) {
    s.validate();
    double lo = s.samples.front().value, hi = lo, sum = 0.0;
    for (const auto& p : s.samples) {
        lo = std::min(lo, p.value);
        hi = std::max(hi, p.value);
        sum += p.value;
    }
    double mean = sum / static_cast<double>(s.samples.size());
    if (mean == 0.0)
        throw domain_error("tc_box: zero mean");
    double span = s.samples.back().T - s.samples.front().T;
    return (hi - lo) / (mean * span) * 1e6;
}

// Box-method line sensitivity in %/V over an increasing V_DD sweep.
inline double ls_box(const std::vector<std::pair<double, double>>& vdd_iref) {
    if (vdd_iref.size() < 2)
        throw input_error("ls_box: at least 2 samples required");
    for (std::size_t i = 1; i < vdd_iref.size(); ++i)
        if (!(vdd_iref[i].first > vdd_iref[i - 1].first))
            throw input_error("ls_box: V_DD must be strictly increasing");
    double lo = vdd_iref.front().second, hi = lo, sum = 0.0;
    for (const auto& p : vdd_iref) {
        lo = std::min(lo, p.second);
        hi = std::max(hi, p.second);
        sum += p.second;
    }
    double mean = sum / static_cast<double>(vdd_iref.size());
    if (mean == 0.0)
        throw domain_error("ls_box: zero mean");
    double span = vdd_iref.back().first - vdd_iref.front().first;
    return (hi - lo) / (mean * span) * 100.0;
}

// Endpoint slope (V(Tmax) - V(Tmin)) / (Tmax - Tmin).
inline double ptat_slope(const TempSeries& s) {
    s.validate();
    return (s.samples.back().value - s.samples.front().value) /
           (s.samples.back().T - s.samples.front().T);
}

struct TaylorLine {
    double v_x0 = 0.0;     // intercept at T = 0 K
    double delta_vx = 0.0; // slope, V/K
};

// Least-squares line fit value = v_x0 + delta_vx * T.
inline TaylorLine taylor_params(const TempSeries& s) {
    s.validate();
    double n = static_cast<double>(s.samples.size());
    double st = 0.0, sv = 0.0, stt = 0.0, stv = 0.0;
    for (const auto& p : s.samples) {
        st += p.T;
        sv += p.value;
        stt += p.T * p.T;
        stv += p.T * p.value;
    }
    double det = n * stt - st * st;
    if (det == 0.0)
        throw input_error("taylor_params: degenerate temperature values");
    TaylorLine line;
    line.delta_vx = (n * stv - st * sv) / det;
    line.v_x0 = (sv - line.delta_vx * st) / n;
    return line;
}

} // namespace cref
