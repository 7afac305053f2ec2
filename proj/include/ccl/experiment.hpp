#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ccl/barriers.hpp"
#include "ccl/comparison.hpp"
#include "ccl/config.hpp"
#include "ccl/export_io.hpp"
#include "ccl/hypotheses.hpp"
#include "ccl/iteration.hpp"
#include "ccl/model.hpp"
#include "ccl/verification.hpp"

namespace ccl {

/// Exit codes of the experiment pipeline (also the CLI process codes).
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitSolver = 3,
    kExitVerification = 4,
};

struct ExperimentOutcome {
    int exit_code = kExitOk;
    std::string message;
    nlohmann::json report;
    std::optional<ExportedFiles> files;
};

namespace detail {

/// Direct constant lower solution on the grid: A = (n/2) log min(s/S) - 1.
/// Valid whenever both profiles are strictly negative at every node.
inline std::optional<Barrier> constant_lower_barrier(const RadialModel& model,
                                                     const RadialProfile& S, const Grid& grid) {
    double ratio_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.node(i);
        const double s = model.s_profile(r);
        const double Sv = S(r);
        if (!(s < 0.0) || !(Sv < 0.0)) return std::nullopt;
        ratio_min = std::min(ratio_min, s / Sv);
    }
    const double level = 0.5 * model.n * std::log(ratio_min) - 1.0;
    Barrier b{GridFunction::constant(grid, level), BarrierKind::ConstantBump,
              level, std::nullopt, std::nullopt, false};
    verify_lower_solution(model, b, S);
    if (!b.weak_residual_ok) return std::nullopt;
    return b;
}

} // namespace detail

/// Full pipeline: classify -> feasibility radius -> barrier construction ->
/// exhaustion solve -> verification -> export. Returns instead of throwing for
/// the failure classes that map to process exit codes.
inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg,
                                        const std::string& out_prefix, bool with_checks = true) {
    ExperimentOutcome out;
    out.report["config"] = {{"out_prefix", out_prefix}};

    RadialModel model = cfg.make_model();
    RadialProfile S_original = cfg.make_target();
    RadialProfile S = S_original;
    HypothesisSet hyp = cfg.hypotheses;

    const double R_full = cfg.radii.back();
    const double h = R_full / static_cast<double>(cfg.grid_n);
    const Grid full_grid(R_full, cfg.grid_n);

    // classification, with the boundary-exponent rescale when needed
    CaseReport rep = classify(hyp);
    double shift_a = 0.0;
    if (rep.matched_case == FeasibleCase::None &&
        rep.scaling_condition != ScalingCondition::None) {
        try {
            auto [shift, shifted] = scaling_shift(S, hyp);
            shift_a = shift.a;
            S = shifted;
            hyp.c = shift.c_shifted;
            rep = classify(hyp);
            out.report["scaling_shift"] = {{"a", shift.a},
                                           {"condition", to_string(shift.condition)},
                                           {"c_shifted", shift.c_shifted}};
        } catch (const invalid_hypothesis_error&) {
            // interior exponents; no rescale available
        } catch (const infeasible_window_error& e) {
            out.exit_code = kExitVerification;
            out.message = e.what();
            out.report["error"] = e.what();
            return out;
        }
    }
    if (rep.matched_case == FeasibleCase::None) {
        out.exit_code = kExitVerification;
        out.message = "no case matched";
        out.report["case_report"] = case_report_json(rep);
        out.report["error"] = "no case matched";
        return out;
    }

    try {
        const double r0 = find_r0(hyp, cfg.barrier_a, cfg.r_search_max,
                                  std::max(model.r_D, h));
        rep.r0 = r0;
    } catch (const infeasible_window_error& e) {
        out.exit_code = kExitVerification;
        out.message = e.what();
        out.report["case_report"] = case_report_json(rep);
        out.report["error"] = e.what();
        return out;
    }
    out.report["case_report"] = case_report_json(rep);

    // barrier construction
    Barrier barrier{GridFunction::constant(full_grid, 0.0), BarrierKind::ConstantBump,
                    std::nullopt, rep.r0, std::nullopt, false};
    nlohmann::json barrier_log = nlohmann::json::array();
    try {
        bool built = false;

        const bool want_bump = cfg.barrier_path == BarrierPath::ConstantBump;
        if (want_bump) {
            const double rd1 = cfg.bump_r_D1 > 0.0 ? cfg.bump_r_D1
                                                   : model.r_D + 0.5 * std::max(1.0, model.r_D);
            const double rd2 = cfg.bump_r_D2 > 0.0 ? cfg.bump_r_D2
                                                   : std::min(2.0 * rd1, 0.75 * R_full);
            BumpBarrier bump = constant_bump_barrier(model, S, hyp.b, hyp.c, cfg.bump_delta,
                                                     rd1, rd2, full_grid);
            std::vector<double> v(full_grid.size());
            for (std::size_t i = 0; i < full_grid.size(); ++i) v[i] = bump.phi[i] + bump.a;
            barrier = Barrier{GridFunction(full_grid, std::move(v)), BarrierKind::ConstantBump,
                              bump.a, rep.r0, std::nullopt, false};
            if (!verify_lower_solution(model, barrier, S))
                throw invalid_barrier_error("bump barrier failed discrete verification");
            barrier_log.push_back({{"path", "constant_bump"},
                                   {"epsilon", bump.epsilon},
                                   {"delta", bump.delta},
                                   {"a", bump.a}});
            built = true;
        }

        if (!built && cfg.barrier_path != BarrierPath::ConstantBump) {
            // pasted log / inner-Dirichlet barrier, widening the gluing radius
            const GridFunction u1 = log_barrier(model.n, cfg.barrier_a, full_grid);
            for (double factor : {1.25, 1.5, 2.0, 3.0}) {
                const double r_glue = *rep.r0 * factor;
                if (r_glue > 0.75 * R_full) break;
                try {
                    InnerBarrier inner = inner_dirichlet_barrier(model, S, r_glue,
                                                                 cfg.barrier_a, full_grid);
                    Barrier glued = glue_barrier(u1, inner.u2, inner.r_boundary + 0.5 * h);
                    glued.a = cfg.barrier_a;
                    glued.r0 = rep.r0;
                    if (verify_lower_solution(model, glued, S)) {
                        barrier = std::move(glued);
                        barrier_log.push_back({{"path", "glued"}, {"r_glue", r_glue}});
                        built = true;
                        break;
                    }
                    barrier_log.push_back({{"path", "glued"},
                                           {"r_glue", r_glue},
                                           {"rejected", "pointwise residual"}});
                } catch (const invalid_gluing_error& e) {
                    barrier_log.push_back({{"path", "glued"},
                                           {"r_glue", r_glue},
                                           {"rejected", e.what()}});
                } catch (const continuity_error& e) {
                    barrier_log.push_back({{"path", "glued"},
                                           {"r_glue", r_glue},
                                           {"rejected", e.what()}});
                }
            }
        }

        if (!built && cfg.barrier_path != BarrierPath::ConstantBump) {
            if (auto cb = detail::constant_lower_barrier(model, S, full_grid)) {
                barrier = std::move(*cb);
                barrier.r0 = rep.r0;
                barrier_log.push_back({{"path", "constant"}, {"a", *barrier.a}});
                built = true;
            }
        }
        if (!built && cfg.barrier_path == BarrierPath::Auto && model.r_D > 0.0) {
            const double rd1 = cfg.bump_r_D1 > 0.0 ? cfg.bump_r_D1
                                                   : model.r_D + 0.5 * std::max(1.0, model.r_D);
            const double rd2 = cfg.bump_r_D2 > 0.0 ? cfg.bump_r_D2
                                                   : std::min(2.0 * rd1, 0.75 * R_full);
            BumpBarrier bump = constant_bump_barrier(model, S, hyp.b, hyp.c, cfg.bump_delta,
                                                     rd1, rd2, full_grid);
            std::vector<double> v(full_grid.size());
            for (std::size_t i = 0; i < full_grid.size(); ++i) v[i] = bump.phi[i] + bump.a;
            barrier = Barrier{GridFunction(full_grid, std::move(v)), BarrierKind::ConstantBump,
                              bump.a, rep.r0, std::nullopt, false};
            if (!verify_lower_solution(model, barrier, S))
                throw invalid_barrier_error("bump barrier failed discrete verification");
            barrier_log.push_back({{"path", "constant_bump"}, {"a", bump.a}});
            built = true;
        }
        if (!built)
            throw invalid_barrier_error("no verified lower solution could be constructed");
    } catch (const std::runtime_error& e) {
        out.exit_code = kExitSolver;
        out.message = e.what();
        out.report["barrier_attempts"] = barrier_log;
        out.report["error"] = e.what();
        return out;
    }
    out.report["barrier_attempts"] = barrier_log;

    // exhaustion solve
    ExhaustionOptions eopt;
    eopt.tol = cfg.tol;
    eopt.max_iter = cfg.max_iter;
    eopt.compact_tol = cfg.compact_tol;
    eopt.n_cells = cfg.grid_n;
    ExhaustionResult ex{};
    try {
        ex = exhaustion_solve(model, S, cfg.radii, barrier, eopt);
    } catch (const std::runtime_error& e) {
        out.exit_code = kExitSolver;
        out.message = e.what();
        out.report["error"] = e.what();
        return out;
    }
    Solution sol = ex.ball_solutions.back();
    out.report["exhaustion"] = {{"compact_trace", ex.compact_trace},
                                {"nonincreasing", ex.trace_nonincreasing},
                                {"final_below_tol", ex.final_below_tol},
                                {"c_loc", ex.c_loc}};

    // verification in the solved frame
    std::optional<CompletenessReport> comp;
    if (with_checks && cfg.check_completeness) {
        comp = verify_completeness(sol.u, barrier, model.n, cfg.barrier_a, *rep.r0);
    }

    // undo the boundary-exponent rescale: the final conformal exponent against
    // the original target is u + a (a constant factor on the metric)
    Barrier export_barrier_obj = barrier;
    if (shift_a != 0.0) {
        for (double& v : sol.u.values) v += shift_a;
        for (double& v : export_barrier_obj.values.values) v += shift_a;
    }

    std::optional<PrescribedReport> presc;
    if (with_checks && cfg.check_prescribed)
        presc = verify_prescribed(model, sol.u, S_original, cfg.prescribed_tol);

    try {
        out.files = export_solution(model, sol, export_barrier_obj, S_original, rep,
                                    presc ? &*presc : nullptr, comp ? &*comp : nullptr,
                                    ex.compact_trace, out_prefix, cfg.plot);
    } catch (const io_error& e) {
        out.exit_code = kExitSolver;
        out.message = e.what();
        out.report["error"] = e.what();
        return out;
    }

    bool verified = true;
    std::ostringstream why;
    if (with_checks) {
        if (!ex.final_below_tol) {
            verified = false;
            why << "compact trace did not stabilize; ";
        }
        if (presc && !presc->pass) {
            verified = false;
            why << "prescribed-curvature error " << presc->sup_error
                << " exceeds " << presc->tol << "; ";
        }
        if (comp && !comp->pass) {
            verified = false;
            why << "completeness bound failed; ";
        }
        if (sol.monotone_slack > 1e-12 || sol.lower_slack > 1e-12) {
            verified = false;
            why << "monotone scheme invariants violated; ";
        }
    }
    if (!verified) {
        out.exit_code = kExitVerification;
        out.message = why.str();
        out.report["error"] = why.str();
        return out;
    }
    out.message = "ok";
    return out;
}

/// Classification stage alone.
inline nlohmann::json run_classify(const ExperimentConfig& cfg) {
    CaseReport rep = classify(cfg.hypotheses);
    if (rep.matched_case != FeasibleCase::None) {
        try {
            const double fl = std::max(cfg.r_D, cfg.radii.back() / static_cast<double>(cfg.grid_n));
            rep.r0 = find_r0(cfg.hypotheses, cfg.barrier_a, cfg.r_search_max, fl);
        } catch (const infeasible_window_error&) {
            // report without a threshold radius
        }
    }
    return case_report_json(rep);
}

/// Sweeps the matched comparison bound against the model's exact radial drift.
inline std::string run_compare_laplacian(const ExperimentConfig& cfg) {
    RadialModel model = cfg.make_model();
    const Grid grid(cfg.radii.back(), cfg.grid_n);
    std::string csv = "r,exact,bound,margin\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.node(i);
        const double exact = model.advection(r);
        const double bound = comparison_bound_matched(cfg.hypotheses, r);
        csv += format_g17(r);
        csv += ',';
        csv += format_g17(exact);
        csv += ',';
        csv += format_g17(bound);
        csv += ',';
        csv += format_g17(bound - exact);
        csv += '\n';
    }
    return csv;
}

} // namespace ccl
