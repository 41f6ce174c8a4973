#pragma once

#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cref/constants.hpp"
#include "cref/devmodel.hpp"
#include "cref/errors.hpp"
#include "cref/refsim.hpp"
#include "cref/sizing.hpp"

namespace cref {

// INI-style config: [section] headers, key = value lines, '#' comments,
// case-sensitive keys.
struct IniValue {
    std::string value;
    int line = 0;
};

struct IniDoc {
    std::map<std::string, std::map<std::string, IniValue>> sections;

    bool has(const std::string& section, const std::string& key) const {
        auto s = sections.find(section);
        return s != sections.end() && s->second.count(key) > 0;
    }

    const IniValue& get(const std::string& section, const std::string& key) const {
        auto s = sections.find(section);
        if (s == sections.end())
            throw config_error("missing section [" + section + "]");
        auto k = s->second.find(key);
        if (k == s->second.end())
            throw config_error("missing key '" + key + "' in section [" + section + "]");
        return k->second;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double to_double(const IniValue& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v.value, &pos);
        if (pos != v.value.size())
            throw std::invalid_argument(v.value);
        return d;
    } catch (const std::exception&) {
        throw config_error("line " + std::to_string(v.line) + ": key '" + key +
                           "': cannot parse '" + v.value + "' as a number");
    }
}

inline int to_int(const IniValue& v, const std::string& key) {
    double d = to_double(v, key);
    int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw config_error("line " + std::to_string(v.line) + ": key '" + key +
                           "': expected an integer, got '" + v.value + "'");
    return i;
}

} // namespace detail

inline IniDoc parse_ini(std::istream& in) {
    IniDoc doc;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw config_error("line " + std::to_string(line_no) +
                                   ": unterminated section header");
            section = detail::trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw config_error("line " + std::to_string(line_no) +
                                   ": empty section name");
            doc.sections[section]; // section may stay empty
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(line_no) +
                               ": expected 'key = value'");
        if (section.empty())
            throw config_error("line " + std::to_string(line_no) +
                               ": key outside any section");
        std::string key = detail::trim(t.substr(0, eq));
        std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty())
            throw config_error("line " + std::to_string(line_no) + ": empty key");
        doc.sections[section][key] = {value, line_no};
    }
    return doc;
}

// "lo:hi:step" inclusive range, or a comma-separated list.
inline std::vector<double> parse_grid(const IniValue& v, const std::string& key) {
    std::vector<double> out;
    const std::string& s = v.value;
    auto bad = [&](const std::string& piece) {
        throw config_error("line " + std::to_string(v.line) + ": key '" + key +
                           "': cannot parse grid element '" + piece + "'");
    };
    auto num = [&](const std::string& piece) {
        try {
            std::size_t pos = 0;
            double d = std::stod(piece, &pos);
            if (pos != piece.size()) bad(piece);
            return d;
        } catch (const std::exception&) {
            bad(piece);
            return 0.0;
        }
    };
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::string part;
        std::istringstream ss(s);
        while (std::getline(ss, part, ':')) parts.push_back(detail::trim(part));
        if (parts.size() != 3)
            throw config_error("line " + std::to_string(v.line) + ": key '" + key +
                               "': range grids need lo:hi:step");
        double lo = num(parts[0]), hi = num(parts[1]), step = num(parts[2]);
        if (!(step > 0.0) || hi < lo)
            throw config_error("line " + std::to_string(v.line) + ": key '" + key +
                               "': bad range bounds");
        for (double x = lo; x <= hi + step * 1e-9; x += step) out.push_back(x);
    } else {
        std::string part;
        std::istringstream ss(s);
        while (std::getline(ss, part, ',')) {
            part = detail::trim(part);
            if (part.empty()) bad(part);
            out.push_back(num(part));
        }
    }
    if (out.empty())
        throw config_error("line " + std::to_string(v.line) + ": key '" + key +
                           "': empty grid");
    return out;
}

inline double cfg_double(const IniDoc& doc, const std::string& section,
                         const std::string& key) {
    return detail::to_double(doc.get(section, key), key);
}

inline double cfg_double_or(const IniDoc& doc, const std::string& section,
                            const std::string& key, double fallback) {
    return doc.has(section, key) ? cfg_double(doc, section, key) : fallback;
}

inline int cfg_int_or(const IniDoc& doc, const std::string& section,
                      const std::string& key, int fallback) {
    return doc.has(section, key) ? detail::to_int(doc.get(section, key), key)
                                 : fallback;
}

inline std::string cfg_string(const IniDoc& doc, const std::string& section,
                              const std::string& key) {
    return doc.get(section, key).value;
}

inline std::string cfg_string_or(const IniDoc& doc, const std::string& section,
                                 const std::string& key,
                                 const std::string& fallback) {
    return doc.has(section, key) ? cfg_string(doc, section, key) : fallback;
}

// [technology] section: global T0_K plus dotted flavor.<label>.<field> keys.
inline TechnologyParams load_technology(const IniDoc& doc) {
    auto sec = doc.sections.find("technology");
    if (sec == doc.sections.end())
        throw config_error("missing section [technology]");
    TechnologyParams tech;
    tech.name = cfg_string_or(doc, "technology", "name", "unnamed");
    tech.T0 = cfg_double_or(doc, "technology", "T0_K", default_T0);

    std::map<std::string, std::map<std::string, IniValue>> per_flavor;
    for (const auto& [key, val] : sec->second) {
        if (key.rfind("flavor.", 0) != 0) continue;
        std::string rest = key.substr(7);
        std::size_t dot = rest.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 >= rest.size())
            throw config_error("line " + std::to_string(val.line) +
                               ": flavor keys must look like flavor.<label>.<field>");
        per_flavor[rest.substr(0, dot)][rest.substr(dot + 1)] = val;
    }
    if (per_flavor.empty())
        throw config_error("[technology]: at least one flavor.<label>.* block required");

    for (const auto& [label, fields] : per_flavor) {
        auto need = [&](const std::string& f) -> const IniValue& {
            auto it = fields.find(f);
            if (it == fields.end())
                throw config_error("[technology]: flavor '" + label +
                                   "' missing field '" + f + "'");
            return it->second;
        };
        auto opt_d = [&](const std::string& f, double fb) {
            auto it = fields.find(f);
            return it == fields.end() ? fb : detail::to_double(it->second, f);
        };
        FlavorParams p;
        p.n = detail::to_double(need("n"), "n");
        p.m = detail::to_double(need("m"), "m");
        p.isq0_acm = detail::to_double(need("isq0_acm_A"), "isq0_acm_A");
        p.isq0_sub = detail::to_double(need("isq0_sub_A"), "isq0_sub_A");
        p.vt0 = detail::to_double(need("vt0_V"), "vt0_V");
        p.vt0_tslope = opt_d("vt0_tslope_VpK", 0.0);
        const IniValue& body = need("body");
        if (body.value == "bulk") {
            p.body = BodyModel::bulk(detail::to_double(need("gamma_b_sqrtV"), "gamma_b_sqrtV"),
                                     detail::to_double(need("two_phi_fp_V"), "two_phi_fp_V"),
                                     opt_d("phi_fp_tslope_VpK", 0.0));
        } else if (body.value == "fdsoi") {
            p.body = BodyModel::fdsoi(detail::to_double(need("gamma_b_star"), "gamma_b_star"));
        } else {
            throw config_error("line " + std::to_string(body.line) +
                               ": body must be 'bulk' or 'fdsoi'");
        }
        try {
            tech.add_flavor(label, p);
        } catch (const domain_error& e) {
            throw config_error(std::string("[technology]: ") + e.what());
        }
    }
    return tech;
}

// [design] section: bias model, SCM parameters, optional calibration and
// supply-path voltages.
inline CurrentReferenceDesign load_design(const IniDoc& doc,
                                          const TechnologyParams& tech) {
    CurrentReferenceDesign d;
    d.tech = tech;
    std::string model = cfg_string(doc, "design", "vx_model");
    if (model == "generic") {
        GenericVx g;
        g.v_off = cfg_double(doc, "design", "voff_V");
        g.k_ptat = cfg_double(doc, "design", "k_ptat");
        g.n = cfg_double(doc, "design", "n");
        d.vx_model = g;
    } else if (model == "fourt") {
        Vref4tDesign v;
        v.s6 = cfg_double_or(doc, "design", "s6", 1.0);
        v.s7 = cfg_double(doc, "design", "s7");
        v.s8 = cfg_double_or(doc, "design", "s8", 1.0);
        v.s9 = cfg_double(doc, "design", "s9");
        v.flavor679 = cfg_string(doc, "design", "flavor679");
        v.flavor8 = cfg_string_or(doc, "design", "flavor8", v.flavor679);
        if (doc.has("design", "vbs7_override_V"))
            v.vbs7_override = cfg_double(doc, "design", "vbs7_override_V");
        d.vx_model = v;
    } else {
        throw config_error("line " + std::to_string(doc.get("design", "vx_model").line) +
                           ": vx_model must be 'generic' or 'fourt'");
    }
    d.scm.alpha = cfg_double(doc, "design", "alpha");
    d.scm.N = cfg_double_or(doc, "design", "N", 3.0);
    d.scm.S2 = cfg_double_or(doc, "design", "s2", 1.0);
    d.scm.isq_ratio = cfg_double_or(doc, "design", "isq_ratio", 1.0);
    d.scm.flavor = cfg_string(doc, "design", "scm_flavor");
    d.vsg4 = cfg_double_or(doc, "design", "vsg4_V", 0.0);
    d.vgs5 = cfg_double_or(doc, "design", "vgs5_V", 0.0);
    d.vgs8 = cfg_double_or(doc, "design", "vgs8_V", 0.0);
    if (doc.has("design", "cal_target")) {
        CalibrationConfig cal;
        std::string target = cfg_string(doc, "design", "cal_target");
        if (target == "m7_offset")
            cal.target = CalibrationConfig::Target::TrimM7Offset;
        else if (target == "m9_slope")
            cal.target = CalibrationConfig::Target::TrimM9Slope;
        else
            throw config_error("line " +
                               std::to_string(doc.get("design", "cal_target").line) +
                               ": cal_target must be 'm7_offset' or 'm9_slope'");
        cal.unit_aspect = cfg_double(doc, "design", "cal_unit_aspect");
        cal.bits = cfg_int_or(doc, "design", "cal_bits", 5);
        cal.base_units = cfg_int_or(doc, "design", "cal_base_units", 1);
        d.cal = cal;
    }
    try {
        d.scm.validate();
        if (const auto* v = std::get_if<Vref4tDesign>(&d.vx_model)) v->validate();
        if (const auto* g = std::get_if<GenericVx>(&d.vx_model)) g->validate();
        if (d.cal) d.cal->validate();
    } catch (const domain_error& e) {
        throw config_error(std::string("[design]: ") + e.what());
    }
    return d;
}

// Optional single synthetic corner, [design] corner_* keys.
inline Corner load_corner(const IniDoc& doc) {
    Corner c;
    if (!doc.has("design", "corner_flavor")) return c;
    c.name = cfg_string_or(doc, "design", "corner_name", "corner");
    FlavorDelta delta;
    delta.vt0_shift = cfg_double_or(doc, "design", "corner_vt0_shift_V", 0.0);
    delta.isq_scale = cfg_double_or(doc, "design", "corner_isq_scale", 1.0);
    delta.n_shift = cfg_double_or(doc, "design", "corner_n_shift", 0.0);
    c.deltas[cfg_string(doc, "design", "corner_flavor")] = delta;
    return c;
}

inline SizingInputs load_sizing(const IniDoc& doc, const TechnologyParams& tech) {
    SizingInputs in;
    in.tech = tech;
    in.i_ref_target = cfg_double(doc, "design", "i_ref_target_A");
    in.N = cfg_double_or(doc, "design", "N", 3.0);
    in.s7_over_s6 = cfg_double_or(doc, "design", "s7_over_s6", 2.0);
    in.s9_over_s6 = cfg_double_or(doc, "design", "s9_over_s6", 8.0);
    in.alpha_range = {cfg_double_or(doc, "design", "alpha_lo", 1.05),
                      cfg_double_or(doc, "design", "alpha_hi", 3.0)};
    in.alpha_step = cfg_double_or(doc, "design", "alpha_step", 0.025);
    in.scm_flavor = cfg_string(doc, "design", "scm_flavor");
    in.flavor679 = cfg_string_or(doc, "design", "flavor679", in.scm_flavor);
    in.flavor8 = cfg_string_or(doc, "design", "flavor8", in.flavor679);
    in.mirror_flavor = cfg_string_or(doc, "design", "mirror_flavor", in.scm_flavor);
    in.buffer_flavor = cfg_string_or(doc, "design", "buffer_flavor", in.scm_flavor);
    in.isq_ratio = cfg_double_or(doc, "design", "isq_ratio", 1.0);
    in.if_mirror = cfg_double_or(doc, "design", "if_mirror", 10.0);
    in.if_buffer = cfg_double_or(doc, "design", "if_buffer", 10.0);
    if (doc.has("design", "vbs7_override_V"))
        in.vbs7_override = cfg_double(doc, "design", "vbs7_override_V");
    if (cfg_string_or(doc, "design", "vx_model", "fourt") == "generic") {
        GenericVx g;
        g.v_off = cfg_double(doc, "design", "voff_V");
        g.k_ptat = cfg_double(doc, "design", "k_ptat");
        g.n = cfg_double(doc, "design", "n");
        in.generic = g;
    }
    try {
        in.validate();
    } catch (const domain_error& e) {
        throw config_error(std::string("[design]: ") + e.what());
    }
    return in;
}

// [sweep] T_degC grid, converted to kelvin. Falls back to -40..85 step 5.
inline std::vector<double> load_temp_grid(const IniDoc& doc) {
    if (!doc.has("sweep", "T_degC")) return default_temp_grid();
    std::vector<double> Ts;
    for (double t : parse_grid(doc.get("sweep", "T_degC"), "T_degC"))
        Ts.push_back(celsius_to_kelvin(t));
    if (Ts.size() < 2)
        throw config_error("[sweep]: T_degC needs at least 2 points");
    return Ts;
}

} // namespace cref
