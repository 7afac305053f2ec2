#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccl/barriers.hpp"
#include "ccl/grid.hpp"
#include "ccl/hypotheses.hpp"
#include "ccl/iteration.hpp"
#include "ccl/verification.hpp"

namespace ccl {

inline std::string format_g17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open " + path + " for writing");
    os << content;
    if (!os) throw io_error("write failed for " + path);
}

inline nlohmann::json case_report_json(const CaseReport& rep) {
    nlohmann::json j;
    j["case"] = to_string(rep.matched_case);
    j["scaling_condition"] = to_string(rep.scaling_condition);
    j["C3"] = rep.C3;
    if (std::isfinite(rep.margin)) j["margin"] = rep.margin; else j["margin"] = nullptr;
    if (rep.r0) j["r0"] = *rep.r0; else j["r0"] = nullptr;
    if (rep.case3_margin_8n2) {
        j["case3_margin_8n2"] = *rep.case3_margin_8n2;
        j["case3_constant_discrepancy"] = rep.case3_constant_discrepancy;
    }
    if (rep.alpha_out_of_range) j["alpha_out_of_range"] = true;
    return j;
}

/// CSV with one row per node: r,u,u_minus,S_achieved,S_target,residual.
inline std::string solution_csv(const Solution& sol, const Barrier& barrier,
                                const GridFunction& achieved, const RadialProfile& S_target,
                                const GridFunction& residual) {
    std::string out = "r,u,u_minus,S_achieved,S_target,residual\n";
    const Grid& g = sol.u.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.node(i);
        out += format_g17(r);
        out += ',';
        out += format_g17(sol.u[i]);
        out += ',';
        out += format_g17(barrier.values[i]);
        out += ',';
        out += format_g17(achieved[i]);
        out += ',';
        out += format_g17(S_target(r));
        out += ',';
        out += format_g17(residual[i]);
        out += '\n';
    }
    return out;
}

/// Minimal standalone polyline chart of u and u_minus against r.
inline std::string solution_svg(const Solution& sol, const Barrier& barrier) {
    const Grid& g = sol.u.grid;
    const double W = 720.0, H = 420.0, pad = 40.0;
    double ymin = std::min(sol.u.min_value(), barrier.values.min_value());
    double ymax = std::max(sol.u.max_value(), barrier.values.max_value());
    if (ymax - ymin < 1e-12) { ymax += 0.5; ymin -= 0.5; }
    const double xs = (W - 2 * pad) / g.r_max();
    const double ys = (H - 2 * pad) / (ymax - ymin);
    auto px = [&](double r) { return pad + r * xs; };
    auto py = [&](double v) { return H - pad - (v - ymin) * ys; };

    auto polyline = [&](const GridFunction& f, const char* color, const char* dash) {
        std::string p = "<polyline fill=\"none\" stroke=\"";
        p += color;
        p += "\" stroke-width=\"1.5\"";
        if (dash[0]) { p += " stroke-dasharray=\""; p += dash; p += "\""; }
        p += " points=\"";
        for (std::size_t i = 0; i < f.size(); ++i) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(f.grid.node(i)), py(f[i]));
            p += buf;
        }
        p += "\"/>\n";
        return p;
    };

    std::string svg;
    char head[256];
    std::snprintf(head, sizeof(head),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n", W, H, W, H);
    svg += head;
    char axes[300];
    std::snprintf(axes, sizeof(axes),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n"
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  pad, H - pad, W - pad, H - pad, pad, pad, pad, H - pad);
    svg += axes;
    svg += polyline(sol.u, "#1f77b4", "");
    svg += polyline(barrier.values, "#d62728", "6,4");
    svg += "<text x=\"50\" y=\"24\" font-size=\"13\">u (solid), lower solution (dashed)</text>\n";
    svg += "</svg>\n";
    return svg;
}

struct ExportedFiles {
    std::string csv_path;
    std::string json_path;
    std::optional<std::string> svg_path;
};

/// Writes <prefix>.csv, <prefix>.json and (optionally) <prefix>.svg.
inline ExportedFiles export_solution(const RadialModel& model, const Solution& sol,
                                     const Barrier& barrier, const RadialProfile& S_target,
                                     const CaseReport& case_report,
                                     const PrescribedReport* prescribed,
                                     const CompletenessReport* completeness,
                                     const std::vector<double>& compact_trace,
                                     const std::string& prefix, bool with_plot = true) {
    const GridFunction residual = nonlinear_residual(model, sol.u, S_target);
    GridFunction achieved = prescribed
        ? prescribed->achieved
        : verify_prescribed(model, sol.u, S_target, 1.0).achieved;

    ExportedFiles files;
    files.csv_path = prefix + ".csv";
    write_text_file(files.csv_path, solution_csv(sol, barrier, achieved, S_target, residual));

    nlohmann::json j;
    j["case_report"] = case_report_json(case_report);
    j["barrier"] = {
        {"kind", to_string(barrier.kind)},
        {"weak_residual_ok", barrier.weak_residual_ok},
    };
    if (barrier.a) j["barrier"]["a"] = *barrier.a;
    if (barrier.r0) j["barrier"]["r0"] = *barrier.r0;
    if (barrier.r_glue) j["barrier"]["r_glue"] = *barrier.r_glue;
    j["solve"] = {
        {"iterations", sol.iterations},
        {"b_k", sol.b_k},
        {"residual_sup", sol.residual_sup},
        {"bound_lower", sol.bound_lower},
        {"bound_upper", sol.bound_upper},
        {"monotone_slack", sol.monotone_slack},
        {"lower_slack", sol.lower_slack},
        {"grid", {{"N", sol.u.grid.size()}, {"r_max", sol.u.grid.r_max()}}},
    };
    j["compact_trace"] = compact_trace;
    if (prescribed) {
        j["prescribed"] = {
            {"sup_error", prescribed->sup_error},
            {"l2_error", prescribed->l2_error},
            {"tol", prescribed->tol},
            {"pass", prescribed->pass},
        };
    }
    if (completeness) {
        j["completeness"] = {
            {"pass", completeness->pass},
            {"r_start", completeness->r_start},
            {"worst_margin", completeness->worst_margin},
            {"length_lower_sum", completeness->length_lower_sum},
            {"minorant_sum", completeness->minorant_sum},
        };
        if (completeness->uniform_bound)
            j["completeness"]["uniform_bound"] = *completeness->uniform_bound;
        if (!completeness->note.empty())
            j["completeness"]["note"] = completeness->note;
    }
    files.json_path = prefix + ".json";
    write_text_file(files.json_path, j.dump(2) + "\n");

    if (with_plot) {
        files.svg_path = prefix + ".svg";
        write_text_file(*files.svg_path, solution_svg(sol, barrier));
    }
    return files;
}

/// Barrier CSV (r,value) plus a JSON metadata sidecar.
inline void export_barrier(const Barrier& barrier, const std::string& prefix) {
    std::string csv = "r,value\n";
    for (std::size_t i = 0; i < barrier.values.size(); ++i) {
        csv += format_g17(barrier.values.grid.node(i));
        csv += ',';
        csv += format_g17(barrier.values[i]);
        csv += '\n';
    }
    write_text_file(prefix + ".csv", csv);

    nlohmann::json j;
    j["kind"] = to_string(barrier.kind);
    j["weak_residual_ok"] = barrier.weak_residual_ok;
    if (barrier.a) j["a"] = *barrier.a; else j["a"] = nullptr;
    if (barrier.r0) j["r0"] = *barrier.r0; else j["r0"] = nullptr;
    if (barrier.r_glue) j["r_glue"] = *barrier.r_glue; else j["r_glue"] = nullptr;
    write_text_file(prefix + ".json", j.dump(2) + "\n");
}

/// Iteration trace CSV: iteration, sup-change.
inline void export_trace(const Solution& sol, const std::string& path) {
    std::string csv = "iteration,sup_change\n";
    for (std::size_t i = 0; i < sol.trace.size(); ++i) {
        csv += std::to_string(i + 1);
        csv += ',';
        csv += format_g17(sol.trace[i]);
        csv += '\n';
    }
    write_text_file(path, csv);
}

} // namespace ccl
