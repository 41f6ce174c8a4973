#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cref/errors.hpp"

namespace cref {

// One row of the comparison table. Optional fields mirror partially
// filled published tables; missing cells simply exclude the record from
// the metrics that need them.
struct ReferenceRecord {
    std::string label;
    std::optional<double> i_ref;  // A
    std::optional<double> power;  // W at the stated V_DD
    std::optional<double> vdd;    // V
    std::optional<double> area;   // mm^2
    double t_min = 0.0;           // degC
    double t_max = 0.0;           // degC
    std::optional<double> tc;     // ppm/degC
    std::optional<double> ls;     // %/V
    std::map<std::string, std::string> extra;

    void validate() const {
        if (!(t_max > t_min))
            throw domain_error("record '" + label + "': t_max must exceed t_min");
        if (area && !(*area > 0.0))
            throw domain_error("record '" + label + "': area must be positive");
        if (tc && !(*tc >= 0.0))
            throw domain_error("record '" + label + "': tc must be non-negative");
    }

    bool has_fom() const { return tc && area && t_max > t_min; }
    bool has_fom2() const { return has_fom() && power && i_ref && *i_ref > 0.0; }
};

// FoM = TC/(t_max - t_min) * area; lower is better.
inline double fom(const ReferenceRecord& rec) {
    rec.validate();
    if (!rec.has_fom())
        throw domain_error("fom: record '" + rec.label + "' lacks tc or area");
    return *rec.tc / (rec.t_max - rec.t_min) * *rec.area;
}

// FoM2 = FoM * power/(1 V * i_ref)
inline double fom2(const ReferenceRecord& rec) {
    if (!rec.i_ref || !(*rec.i_ref > 0.0))
        throw domain_error("fom2: record '" + rec.label + "' needs a positive i_ref");
    if (!rec.power)
        throw domain_error("fom2: record '" + rec.label + "' lacks power");
    return fom(rec) * (*rec.power / (1.0 * *rec.i_ref));
}

// Ascending by fom; ties break by label. Records without the needed fields
// sort to the end (by label among themselves).
inline std::vector<ReferenceRecord> rank(std::vector<ReferenceRecord> records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const ReferenceRecord& a, const ReferenceRecord& b) {
                         bool fa = a.has_fom(), fb = b.has_fom();
                         if (fa != fb) return fa;
                         if (fa && fb) {
                             double va = fom(a), vb = fom(b);
                             if (va != vb) return va < vb;
                         }
                         return a.label < b.label;
                     });
    return records;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

inline std::optional<double> parse_opt_double(const std::string& s, int line_no,
                                              const std::string& col) {
    if (s.empty()) return std::nullopt;
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("line " + std::to_string(line_no) + ": column '" + col +
                           "': cannot parse '" + s + "' as a number");
    }
}

} // namespace detail

inline const char* reference_csv_header() {
    return "label,i_ref_A,power_W,vdd_V,area_mm2,t_min_C,t_max_C,tc_ppmC,ls_pctV";
}

// Reads the comparison-table schema; empty cells mean missing.
inline std::vector<ReferenceRecord> read_reference_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw config_error("reference CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != reference_csv_header())
        throw config_error("reference CSV: bad header, expected '" +
                           std::string(reference_csv_header()) + "'");
    std::vector<ReferenceRecord> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != 9)
            throw config_error("line " + std::to_string(line_no) +
                               ": expected 9 cells, got " + std::to_string(cells.size()));
        ReferenceRecord r;
        r.label = cells[0];
        r.i_ref = detail::parse_opt_double(cells[1], line_no, "i_ref_A");
        r.power = detail::parse_opt_double(cells[2], line_no, "power_W");
        r.vdd = detail::parse_opt_double(cells[3], line_no, "vdd_V");
        r.area = detail::parse_opt_double(cells[4], line_no, "area_mm2");
        auto tmin = detail::parse_opt_double(cells[5], line_no, "t_min_C");
        auto tmax = detail::parse_opt_double(cells[6], line_no, "t_max_C");
        if (!tmin || !tmax)
            throw config_error("line " + std::to_string(line_no) +
                               ": t_min_C and t_max_C are required");
        r.t_min = *tmin;
        r.t_max = *tmax;
        r.tc = detail::parse_opt_double(cells[7], line_no, "tc_ppmC");
        r.ls = detail::parse_opt_double(cells[8], line_no, "ls_pctV");
        r.validate();
        out.push_back(r);
    }
    return out;
}

} // namespace cref
