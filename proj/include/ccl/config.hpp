#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ccl/errors.hpp"
#include "ccl/hypotheses.hpp"
#include "ccl/model.hpp"

namespace ccl {

/// Config (or schema) problems carry the offending field path.
class config_error : public std::runtime_error {
public:
    config_error(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Piecewise-linear profile from a sorted (r, value) table; clamped outside.
class TabulatedProfile {
public:
    explicit TabulatedProfile(std::vector<std::pair<double, double>> table)
        : table_(std::move(table)) {
        if (table_.size() < 2)
            throw invalid_parameter_error("TabulatedProfile: need at least 2 rows");
        for (std::size_t i = 1; i < table_.size(); ++i)
            if (!(table_[i].first > table_[i - 1].first))
                throw invalid_parameter_error("TabulatedProfile: radii must increase");
    }

    double operator()(double r) const {
        if (r <= table_.front().first) return table_.front().second;
        if (r >= table_.back().first) return table_.back().second;
        auto it = std::lower_bound(table_.begin(), table_.end(), r,
                                   [](const auto& row, double x) { return row.first < x; });
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double t = (r - lo.first) / (hi.first - lo.first);
        return lo.second + t * (hi.second - lo.second);
    }

private:
    std::vector<std::pair<double, double>> table_;
};

enum class BarrierPath { Auto, Glued, ConstantBump };

struct ExperimentConfig {
    // model
    std::string model_preset = "hyperbolic";  // hyperbolic | euclidean | custom
    int n = 1;
    double r_max = 16.0;
    double r_D = 0.0;
    std::optional<double> s_constant;
    std::optional<TabulatedProfile> s_table;
    std::optional<TabulatedProfile> drift_table;       // custom models: (r, d)
    std::optional<TabulatedProfile> lee_table;         // custom models: (r, tau)

    HypothesisSet hypotheses;

    std::optional<double> S_constant;
    std::optional<TabulatedProfile> S_table;

    std::size_t grid_n = 2048;
    std::vector<double> radii{4.0, 8.0, 12.0, 16.0};

    double tol = 1e-8;
    std::size_t max_iter = 500;
    double compact_tol = 1e-4;

    bool check_prescribed = true;
    bool check_completeness = true;
    double prescribed_tol = 1e-3;

    double barrier_a = 1.0;
    double r_search_max = 1e4;
    BarrierPath barrier_path = BarrierPath::Auto;
    double bump_r_D1 = 0.0;   // 0 = derive from r_D
    double bump_r_D2 = 0.0;
    double bump_delta = 1.0;

    std::string out_prefix = "experiment";
    bool plot = true;

    RadialModel make_model() const {
        RadialProfile s;
        if (s_table) {
            auto t = *s_table;
            s = [t](double r) { return t(r); };
        } else {
            const double v = s_constant.value_or(-1.0);
            s = [v](double) { return v; };
        }
        if (model_preset == "hyperbolic")
            return make_hyperbolic_model_s(n, r_max, s, r_D);
        if (model_preset == "euclidean") {
            RadialModel m = make_euclidean_model(n, r_max, s);
            m.r_D = r_D;
            return m;
        }
        if (model_preset == "custom") {
            if (!drift_table)
                throw config_error("model.table", "custom model needs a drift table");
            auto d = *drift_table;
            RadialProfile drift = [d](double r) { return d(r); };
            RadialProfile lee = [](double) { return 0.0; };
            if (lee_table) {
                auto tl = *lee_table;
                lee = [tl](double r) { return tl(r); };
            }
            return RadialModel(n, drift, lee, s, r_max, r_D, false, "custom");
        }
        throw config_error("model.preset", "unknown preset '" + model_preset + "'");
    }

    RadialProfile make_target() const {
        if (S_table) {
            auto t = *S_table;
            return [t](double r) { return t(r); };
        }
        const double v = S_constant.value_or(-1.0);
        return [v](double) { return v; };
    }
};

namespace detail {

inline TabulatedProfile parse_table(const nlohmann::json& j, const std::string& field,
                                    std::size_t cols) {
    if (!j.is_array()) throw config_error(field, "expected an array of rows");
    std::vector<std::pair<double, double>> rows;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != cols)
            throw config_error(field, "each row must have " + std::to_string(cols) + " numbers");
        rows.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    try {
        return TabulatedProfile(std::move(rows));
    } catch (const invalid_parameter_error& e) {
        throw config_error(field, e.what());
    }
}

template <typename T>
T field_or(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw config_error(key, "wrong type");
    }
}

} // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    ExperimentConfig cfg;

    if (j.contains("model")) {
        const auto& m = j.at("model");
        cfg.model_preset = detail::field_or<std::string>(m, "preset", "hyperbolic");
        cfg.n = detail::field_or<int>(m, "n", 1);
        cfg.r_max = detail::field_or<double>(m, "r_max", 16.0);
        cfg.r_D = detail::field_or<double>(m, "r_D", 0.0);
        if (m.contains("s_constant")) cfg.s_constant = m.at("s_constant").get<double>();
        if (m.contains("s_table")) cfg.s_table = detail::parse_table(m.at("s_table"), "model.s_table", 2);
        if (m.contains("drift_table"))
            cfg.drift_table = detail::parse_table(m.at("drift_table"), "model.drift_table", 2);
        if (m.contains("lee_table"))
            cfg.lee_table = detail::parse_table(m.at("lee_table"), "model.lee_table", 2);
        if (cfg.n < 1) throw config_error("model.n", "must be >= 1");
        if (!(cfg.r_max > 0.0)) throw config_error("model.r_max", "must be positive");
    }

    if (!j.contains("hypotheses")) throw config_error("hypotheses", "section is required");
    {
        const auto& h = j.at("hypotheses");
        cfg.hypotheses.C1 = detail::field_or<double>(h, "C1", 1.0);
        cfg.hypotheses.C2 = detail::field_or<double>(h, "C2", 0.0);
        cfg.hypotheses.alpha = detail::field_or<double>(h, "alpha", 0.0);
        cfg.hypotheses.beta = detail::field_or<double>(h, "beta", 0.5 * cfg.hypotheses.alpha);
        cfg.hypotheses.b = detail::field_or<double>(h, "b", 1.0);
        cfg.hypotheses.l = detail::field_or<double>(h, "l", 0.0);
        cfg.hypotheses.c = detail::field_or<double>(h, "c", 1.0);
        cfg.hypotheses.k = detail::field_or<double>(h, "k", 0.0);
        cfg.hypotheses.n = detail::field_or<int>(h, "n", cfg.n);
        try {
            cfg.hypotheses.validate();
        } catch (const invalid_parameter_error& e) {
            throw config_error("hypotheses", e.what());
        }
    }

    if (j.contains("target_S")) {
        const auto& t = j.at("target_S");
        if (t.contains("value")) cfg.S_constant = t.at("value").get<double>();
        if (t.contains("table")) cfg.S_table = detail::parse_table(t.at("table"), "target_S.table", 2);
        if (!cfg.S_constant && !cfg.S_table)
            throw config_error("target_S", "needs 'value' or 'table'");
    }

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        cfg.grid_n = detail::field_or<std::size_t>(g, "N", cfg.grid_n);
        if (g.contains("radii")) {
            cfg.radii = g.at("radii").get<std::vector<double>>();
            if (cfg.radii.empty()) throw config_error("grid.radii", "must be nonempty");
        }
        if (cfg.grid_n < 16) throw config_error("grid.N", "must be >= 16");
        for (double r : cfg.radii)
            if (!(r > 0.0) || r > cfg.r_max)
                throw config_error("grid.radii", "radii must lie in (0, r_max]");
        if (!std::is_sorted(cfg.radii.begin(), cfg.radii.end()))
            throw config_error("grid.radii", "radii must be nondecreasing");
    }

    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        cfg.tol = detail::field_or<double>(t, "tol", cfg.tol);
        cfg.max_iter = detail::field_or<std::size_t>(t, "max_iter", cfg.max_iter);
        cfg.compact_tol = detail::field_or<double>(t, "compact_tol", cfg.compact_tol);
        if (!(cfg.tol > 0.0)) throw config_error("tolerances.tol", "must be positive");
    }

    if (j.contains("checks")) {
        const auto& c = j.at("checks");
        cfg.check_prescribed = detail::field_or<bool>(c, "prescribed", true);
        cfg.check_completeness = detail::field_or<bool>(c, "completeness", true);
        cfg.prescribed_tol = detail::field_or<double>(c, "prescribed_tol", cfg.prescribed_tol);
    }

    if (j.contains("barrier")) {
        const auto& b = j.at("barrier");
        cfg.barrier_a = detail::field_or<double>(b, "a", 1.0);
        cfg.r_search_max = detail::field_or<double>(b, "r_search_max", 1e4);
        const std::string path = detail::field_or<std::string>(b, "path", "auto");
        if (path == "auto") cfg.barrier_path = BarrierPath::Auto;
        else if (path == "glued") cfg.barrier_path = BarrierPath::Glued;
        else if (path == "constant_bump") cfg.barrier_path = BarrierPath::ConstantBump;
        else throw config_error("barrier.path", "unknown path '" + path + "'");
        cfg.bump_r_D1 = detail::field_or<double>(b, "r_D1", 0.0);
        cfg.bump_r_D2 = detail::field_or<double>(b, "r_D2", 0.0);
        cfg.bump_delta = detail::field_or<double>(b, "delta", 1.0);
        if (!(cfg.barrier_a > 0.0)) throw config_error("barrier.a", "must be positive");
    }

    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("config", "cannot open file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error("config", std::string("parse error: ") + e.what());
    }
    return parse_config(j);
}

} // namespace ccl
