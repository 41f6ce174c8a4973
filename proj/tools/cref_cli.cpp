// Batch front end for the current-reference toolkit. Subcommands:
//   model     device-equation curves (acm_f, isq, delta_vt)
//   simulate  I_REF(T) of a composite design
//   sweep     1D/2D parameter sweeps of tc / s_iref / voff / ptat_slope
//   size      four-step sizing flow
//   calibrate per-code trim table and best-code selection
//   metrics   box TC / LS from ingested CSVs
//   fom       figure-of-merit ranking of a comparison table
//
// Exit codes: 0 success, 1 domain/constraint failure, 2 convergence failure,
// 3 config/schema error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cref/cref.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = ".";
    bool quiet = false;
};

cref::IniDoc load_config(const GlobalOpts& g) {
    if (g.config_path.empty())
        throw cref::config_error("this command requires --config <path>");
    std::ifstream in(g.config_path);
    if (!in)
        throw cref::config_error("cannot open config file '" + g.config_path + "'");
    return cref::parse_ini(in);
}

std::ofstream open_out(const GlobalOpts& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    fs::path p = fs::path(g.out_dir) / name;
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw cref::config_error("cannot open output file '" + p.string() + "'");
    return out;
}

std::vector<double> parse_cli_grid(const std::string& s, const std::string& what) {
    return cref::parse_grid(cref::IniValue{s, 0}, what);
}

int out_precision(const cref::IniDoc& doc) {
    return cref::cfg_int_or(doc, "output", "precision", 9);
}

// ---- model ----------------------------------------------------------------

int cmd_model(const GlobalOpts& g, const std::string& op,
              const std::string& if_grid, const std::string& t_grid,
              const std::string& vbs_grid, const std::string& flavor_label) {
    using cref::format_g;
    if (op == "acm_f") {
        if (if_grid.empty())
            throw cref::config_error("model --op acm_f requires --if <grid>");
        auto ifs = parse_cli_grid(if_grid, "--if");
        auto ts = parse_cli_grid(t_grid.empty() ? "25" : t_grid, "--T");
        auto out = open_out(g, "model_acm_f.csv");
        out << "i_f,T_degC,acm_f_V\n";
        for (double i : ifs)
            for (double tc : ts)
                out << format_g(i) << ',' << format_g(tc) << ','
                    << format_g(cref::acm_f(i, cref::celsius_to_kelvin(tc))) << '\n';
        return 0;
    }
    cref::IniDoc doc = load_config(g);
    cref::TechnologyParams tech = cref::load_technology(doc);
    if (flavor_label.empty())
        throw cref::config_error("model --op " + op + " requires --flavor <label>");
    const cref::FlavorParams& f = tech.flavor(flavor_label);
    if (op == "isq") {
        auto ts = parse_cli_grid(t_grid.empty() ? "-40:85:5" : t_grid, "--T");
        auto out = open_out(g, "model_isq.csv");
        out << "T_degC,isq_acm_A,isq_sub_A\n";
        for (double tc : ts) {
            double T = cref::celsius_to_kelvin(tc);
            out << format_g(tc) << ',' << format_g(cref::isq_acm(f, T)) << ','
                << format_g(cref::isq_sub(f, T)) << '\n';
        }
        return 0;
    }
    if (op == "delta_vt") {
        if (vbs_grid.empty())
            throw cref::config_error("model --op delta_vt requires --vbs <grid>");
        auto vbs = parse_cli_grid(vbs_grid, "--vbs");
        auto ts = parse_cli_grid(t_grid.empty() ? "25" : t_grid, "--T");
        auto out = open_out(g, "model_delta_vt.csv");
        out << "T_degC,V_BS_V,delta_vt_V\n";
        for (double tc : ts) {
            double T = cref::celsius_to_kelvin(tc);
            for (double v : vbs)
                out << format_g(tc) << ',' << format_g(v) << ','
                    << format_g(cref::delta_vt(f.body, v, T, tech.T0)) << '\n';
        }
        return 0;
    }
    throw cref::config_error("model: unknown --op '" + op +
                             "' (expected acm_f, isq, or delta_vt)");
}

// ---- simulate -------------------------------------------------------------

int cmd_simulate(const GlobalOpts& g) {
    cref::IniDoc doc = load_config(g);
    cref::TechnologyParams tech = cref::load_technology(doc);
    cref::CurrentReferenceDesign design = cref::load_design(doc, tech);
    cref::Corner corner = cref::load_corner(doc);
    std::vector<double> Ts = cref::load_temp_grid(doc);
    int prec = out_precision(doc);

    auto points = cref::simulate_points(design, corner, Ts);
    cref::TempSeries series;
    for (const auto& p : points) series.push(p.T, p.i_ref);
    double tc = cref::tc_box(series);

    auto out = open_out(g, "simulate.csv");
    out << "T_degC,V_X_V,i_f2,I_REF_A\n";
    for (const auto& p : points)
        out << cref::format_g(cref::kelvin_to_celsius(p.T), prec) << ','
            << cref::format_g(p.v_x, prec) << ',' << cref::format_g(p.i_f2, prec)
            << ',' << cref::format_g(p.i_ref, prec) << '\n';
    out << "# tc_box_ppm_per_C = " << cref::format_g(tc, prec) << '\n';
    if (!g.quiet)
        std::cout << "tc_box_ppm_per_C = " << cref::format_g(tc, prec) << '\n';
    return 0;
}

// ---- sweep ----------------------------------------------------------------

struct SweepAxis {
    std::string param;
    std::vector<double> values;
};

void apply_sweep_param(cref::CurrentReferenceDesign& d, const std::string& param,
                       double value) {
    if (param == "alpha") {
        d.scm.alpha = value;
        return;
    }
    if (param == "k_ptat") {
        auto* gv = std::get_if<cref::GenericVx>(&d.vx_model);
        if (!gv)
            throw cref::config_error("sweep: k_ptat applies to the generic bias model only");
        gv->k_ptat = value;
        return;
    }
    auto* v = std::get_if<cref::Vref4tDesign>(&d.vx_model);
    if (!v)
        throw cref::config_error("sweep: parameter '" + param +
                                 "' applies to the fourt bias model only");
    if (param == "s7_over_s6")
        v->s7 = value * v->s6;
    else if (param == "s9_over_s6")
        v->s9 = value * v->s6;
    else
        throw cref::config_error("sweep: unknown parameter '" + param + "'");
}

double sweep_metric(const cref::CurrentReferenceDesign& d,
                    const std::vector<double>& Ts, const std::string& metric) {
    if (metric == "tc")
        return cref::tc_box(cref::simulate_iref(d, cref::Corner{}, Ts));
    if (metric == "s_iref") {
        double T0 = d.tech.T0;
        double vx = cref::vx_at(d.vx_model, d.tech, T0);
        double if2 = cref::scm_solve_if2(vx, d.scm.alpha, T0);
        return cref::sensitivity_siref(if2, d.scm.alpha, T0);
    }
    if (metric == "voff") {
        if (const auto* gv = std::get_if<cref::GenericVx>(&d.vx_model))
            return gv->v_off;
        return cref::voff(std::get<cref::Vref4tDesign>(d.vx_model), d.tech, d.tech.T0);
    }
    if (metric == "ptat_slope") {
        cref::TempSeries vx;
        for (double T : Ts) vx.push(T, cref::vx_at(d.vx_model, d.tech, T));
        return cref::ptat_slope(vx);
    }
    throw cref::config_error("sweep: unknown metric '" + metric +
                             "' (expected tc, s_iref, voff, ptat_slope)");
}

int cmd_sweep(const GlobalOpts& g) {
    cref::IniDoc doc = load_config(g);
    cref::TechnologyParams tech = cref::load_technology(doc);
    cref::CurrentReferenceDesign base = cref::load_design(doc, tech);
    std::vector<double> Ts = cref::load_temp_grid(doc);
    int prec = out_precision(doc);

    SweepAxis a1;
    a1.param = cref::cfg_string(doc, "sweep", "param1");
    a1.values = cref::parse_grid(doc.get("sweep", "param1_grid"), "param1_grid");
    SweepAxis a2;
    if (doc.has("sweep", "param2")) {
        a2.param = cref::cfg_string(doc, "sweep", "param2");
        a2.values = cref::parse_grid(doc.get("sweep", "param2_grid"), "param2_grid");
    }
    std::vector<std::string> metrics;
    {
        std::string mlist = cref::cfg_string_or(doc, "sweep", "metrics", "tc");
        std::string item;
        std::istringstream ss(mlist);
        while (std::getline(ss, item, ','))
            if (!(item = cref::detail::trim(item)).empty()) metrics.push_back(item);
        if (metrics.empty())
            throw cref::config_error("[sweep]: metrics list is empty");
    }

    auto out = open_out(g, "sweep.csv");
    out << "param1,param2,metric,value\n";
    long cells = 0, skipped = 0;
    std::vector<double> outer = a2.values.empty() ? std::vector<double>{0.0} : a2.values;
    for (double v1 : a1.values) {
        for (double v2 : outer) {
            cref::CurrentReferenceDesign d = base;
            apply_sweep_param(d, a1.param, v1);
            if (!a2.values.empty()) apply_sweep_param(d, a2.param, v2);
            ++cells;
            for (const std::string& metric : metrics) {
                std::string cell2 = a2.values.empty() ? "" : cref::format_g(v2, prec);
                try {
                    double val = sweep_metric(d, Ts, metric);
                    out << cref::format_g(v1, prec) << ',' << cell2 << ',' << metric
                        << ',' << cref::format_g(val, prec) << '\n';
                } catch (const cref::domain_error&) {
                    ++skipped;
                }
            }
        }
    }
    out << "# cells = " << cells << ", skipped_evaluations = " << skipped << '\n';
    if (!g.quiet)
        std::cout << "sweep: " << cells << " cells, " << skipped
                  << " skipped evaluations\n";
    return 0;
}

// ---- size -----------------------------------------------------------------

void print_report(std::ostream& os, const cref::SizingReport& rep, int prec) {
    using cref::format_g;
    os << "alpha_opt       " << format_g(rep.alpha_opt, prec) << '\n'
       << "tc_analytic     " << format_g(rep.tc_analytic, prec) << " ppm/degC\n"
       << "s_iref          " << format_g(rep.s_iref, prec) << " 1/V\n"
       << "vx_t0           " << format_g(rep.vx_t0, prec) << " V\n"
       << "if1             " << format_g(rep.if1, prec) << '\n'
       << "if2             " << format_g(rep.if2, prec) << '\n'
       << "s1              " << format_g(rep.s1, prec) << '\n'
       << "s2              " << format_g(rep.s2, prec) << '\n'
       << "s3              " << format_g(rep.s3, prec) << '\n'
       << "s4              " << format_g(rep.s4, prec) << '\n'
       << "s5              " << format_g(rep.s5, prec) << '\n';
    for (const auto& c : rep.constraint_checks)
        os << "check: " << c.name << "  " << (c.pass ? "PASS" : "FAIL")
           << "  margin " << format_g(c.margin, prec) << " V\n";
}

int cmd_size(const GlobalOpts& g) {
    cref::IniDoc doc = load_config(g);
    cref::TechnologyParams tech = cref::load_technology(doc);
    cref::SizingInputs in = cref::load_sizing(doc, tech);
    std::vector<double> Ts = cref::load_temp_grid(doc);
    int prec = out_precision(doc);

    double vx_t0;
    if (in.generic) {
        vx_t0 = cref::vx_generic(*in.generic, tech.T0);
    } else {
        vx_t0 = cref::step1_vref(in).second;
    }

    cref::AlphaGuess guess;
    cref::SizingReport rep;
    try {
        guess = cref::step2_alpha_guess(in, Ts);
        rep = cref::step3_aspect_ratios(in, vx_t0, guess.alpha);
    } catch (const cref::domain_error& e) {
        throw cref::domain_error(std::string("sizing step (b) bias solve: ") + e.what());
    }
    bool has_alpha_sim = doc.has("design", "alpha_sim");
    if (has_alpha_sim)
        rep = cref::step4_finalize(in, cref::cfg_double(doc, "design", "alpha_sim"));

    double s1s2_expected =
        cref::scm_s1_over_s2(rep.alpha_opt, in.N, in.isq_ratio);
    bool identity_ok =
        std::abs(rep.s1 / rep.s2 - s1s2_expected) <= 1e-9 * s1s2_expected;

    auto txt = open_out(g, "sizing_report.txt");
    txt << "alpha_guess     " << cref::format_g(guess.alpha, prec) << '\n'
        << "tc_at_guess     " << cref::format_g(guess.tc, prec) << " ppm/degC\n";
    print_report(txt, rep, prec);
    txt << "check: s1/s2 ratio identity  " << (identity_ok ? "PASS" : "FAIL") << '\n';

    auto csv = open_out(g, "sizing_report.csv");
    csv << "alpha_opt,tc_analytic_ppmC,s_iref_1pV,vx_t0_V,if1,if2,s1,s2,s3,s4,s5\n";
    csv << cref::format_g(rep.alpha_opt, prec) << ','
        << cref::format_g(rep.tc_analytic, prec) << ','
        << cref::format_g(rep.s_iref, prec) << ','
        << cref::format_g(rep.vx_t0, prec) << ','
        << cref::format_g(rep.if1, prec) << ',' << cref::format_g(rep.if2, prec)
        << ',' << cref::format_g(rep.s1, prec) << ','
        << cref::format_g(rep.s2, prec) << ',' << cref::format_g(rep.s3, prec)
        << ',' << cref::format_g(rep.s4, prec) << ','
        << cref::format_g(rep.s5, prec) << '\n';

    if (!g.quiet)
        std::cout << "alpha_guess = " << cref::format_g(guess.alpha, prec)
                  << ", tc = " << cref::format_g(rep.tc_analytic, prec)
                  << " ppm/degC\n";
    for (const auto& c : rep.constraint_checks)
        if (!c.pass)
            throw cref::domain_error("sizing constraint failed: " + c.name);
    return 0;
}

// ---- calibrate ------------------------------------------------------------

int cmd_calibrate(const GlobalOpts& g) {
    cref::IniDoc doc = load_config(g);
    cref::TechnologyParams tech = cref::load_technology(doc);
    cref::CurrentReferenceDesign design = cref::load_design(doc, tech);
    cref::Corner corner = cref::load_corner(doc);
    std::vector<double> Ts = cref::load_temp_grid(doc);
    int prec = out_precision(doc);

    cref::CalibrationResult res = cref::calibrate_tc(design, corner, Ts);
    auto out = open_out(g, "calibrate.csv");
    out << "code,tc_ppmC,voff_mV,slope_mV_per_C\n";
    for (const auto& e : res.per_code) {
        if (!e.solvable) {
            out << e.code << ",,,\n";
            continue;
        }
        out << e.code << ',' << cref::format_g(e.tc, prec) << ','
            << cref::format_g(e.voff * 1e3, prec) << ','
            << cref::format_g(e.slope * 1e3, prec) << '\n';
    }
    out << "# best_code = " << res.best_code
        << ", best_tc_ppm_per_C = " << cref::format_g(res.best_tc, prec) << '\n';
    if (!g.quiet)
        std::cout << "best_code = " << res.best_code
                  << ", best_tc = " << cref::format_g(res.best_tc, prec)
                  << " ppm/degC\n";
    return 0;
}

// ---- metrics --------------------------------------------------------------

struct IngestedTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int col(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return -1;
    }
};

IngestedTable read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw cref::config_error("cannot open '" + path + "'");
    IngestedTable t;
    std::string line;
    if (!std::getline(in, line))
        throw cref::config_error("'" + path + "': empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
    }
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw cref::config_error("'" + path + "' line " +
                                         std::to_string(line_no) +
                                         ": cannot parse '" + cell + "'");
            }
        }
        if (row.size() != t.columns.size())
            throw cref::config_error("'" + path + "' line " + std::to_string(line_no) +
                                     ": cell count mismatch");
        t.rows.push_back(row);
    }
    return t;
}

int cmd_metrics(const GlobalOpts& g, const std::vector<std::string>& files) {
    if (files.empty())
        throw cref::config_error("metrics: at least one CSV file required");
    for (const std::string& path : files) {
        IngestedTable t = read_table(path);
        int ct = t.col("T_degC"), ci = t.col("I_REF_A"), cv = t.col("VDD_V");
        bool any = false;
        if (ct >= 0 && ci >= 0) {
            cref::TempSeries s;
            for (const auto& r : t.rows)
                s.push(cref::celsius_to_kelvin(r[ct]), r[ci]);
            std::cout << path << ": tc_box = " << cref::format_g(cref::tc_box(s))
                      << " ppm/degC\n";
            any = true;
        }
        if (cv >= 0 && ci >= 0) {
            std::vector<std::pair<double, double>> s;
            for (const auto& r : t.rows) s.emplace_back(r[cv], r[ci]);
            std::cout << path << ": ls_box = " << cref::format_g(cref::ls_box(s))
                      << " %/V\n";
            any = true;
        }
        if (!any)
            throw cref::config_error("'" + path +
                                     "': need T_degC,I_REF_A or VDD_V,I_REF_A columns");
    }
    return 0;
}

// ---- fom ------------------------------------------------------------------

int cmd_fom(const GlobalOpts& g, const std::vector<std::string>& files) {
    if (files.size() != 1)
        throw cref::config_error("fom: exactly one comparison-table CSV required");
    std::ifstream in(files[0]);
    if (!in)
        throw cref::config_error("cannot open '" + files[0] + "'");
    std::vector<cref::ReferenceRecord> records = cref::read_reference_csv(in);
    for (const auto& r : records)
        if (!r.has_fom())
            std::cerr << "warning: record '" << r.label
                      << "' lacks tc/area, excluded from ranking\n";
    auto ranked = cref::rank(records);
    std::cout << "rank,label,fom,fom2\n";
    int rank_no = 0;
    for (const auto& r : ranked) {
        if (!r.has_fom()) continue;
        ++rank_no;
        std::cout << rank_no << ',' << r.label << ','
                  << cref::format_g(cref::fom(r));
        if (r.has_fom2())
            std::cout << ',' << cref::format_g(cref::fom2(r));
        else
            std::cout << ',';
        std::cout << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nA-range CWT current-reference design toolkit"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--config", g.config_path, "INI config path");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_flag("--quiet", g.quiet, "suppress stdout summaries");

    auto* model = app.add_subcommand("model", "device-equation curves");
    std::string op, if_grid, t_grid, vbs_grid, flavor_label;
    model->add_option("--op", op, "acm_f | isq | delta_vt")->required();
    model->add_option("--if", if_grid, "inversion-level grid");
    model->add_option("--T", t_grid, "temperature grid (degC)");
    model->add_option("--vbs", vbs_grid, "V_BS grid (V)");
    model->add_option("--flavor", flavor_label, "flavor label");

    auto* simulate = app.add_subcommand("simulate", "I_REF(T) simulation");
    auto* sweep = app.add_subcommand("sweep", "parameter sweeps");
    auto* size = app.add_subcommand("size", "four-step sizing flow");
    auto* calibrate = app.add_subcommand("calibrate", "trim-code search");
    auto* metrics = app.add_subcommand("metrics", "box TC / LS from CSVs");
    std::vector<std::string> metric_files;
    metrics->add_option("files", metric_files, "CSV files");
    auto* fomc = app.add_subcommand("fom", "figure-of-merit ranking");
    std::vector<std::string> fom_files;
    fomc->add_option("files", fom_files, "comparison-table CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (model->parsed())
            return cmd_model(g, op, if_grid, t_grid, vbs_grid, flavor_label);
        if (simulate->parsed()) return cmd_simulate(g);
        if (sweep->parsed()) return cmd_sweep(g);
        if (size->parsed()) return cmd_size(g);
        if (calibrate->parsed()) return cmd_calibrate(g);
        if (metrics->parsed()) return cmd_metrics(g, metric_files);
        if (fomc->parsed()) return cmd_fom(g, fom_files);
    } catch (const cref::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 3;
    } catch (const cref::convergence_error& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return 2;
    } catch (const cref::input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const cref::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
