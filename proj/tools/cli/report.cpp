#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>

#include "cli.hpp"

#ifndef WAVEMASK_VERSION
#define WAVEMASK_VERSION "0.0.0"
#endif

namespace wavemask::cli {

namespace {

using nlohmann::ordered_json;

ordered_json numbers(std::span<const double> values) {
    ordered_json arr = ordered_json::array();
    for (double v : values) arr.push_back(report_number(v));
    return arr;
}

ordered_json optional_number(const std::optional<double>& v) {
    return v ? ordered_json(report_number(*v)) : ordered_json(nullptr);
}

std::string timestamp() {
    std::time_t t = 0;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
        t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    } else {
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string command_name(Command c) {
    switch (c) {
        case Command::MaskSignal: return "mask-signal";
        case Command::MaskMicrofile: return "mask-microfile";
        case Command::Wrm: return "wrm";
        case Command::Verify: return "verify";
    }
    return "unknown";
}

ordered_json goal_json(std::size_t index, const Goal& g) {
    ordered_json j;
    j["index"] = index;
    j["goal"] = to_string(g.kind);
    if (g.threshold) j["threshold"] = report_number(*g.threshold);
    if (g.min) j["min"] = report_number(*g.min);
    if (g.max) j["max"] = report_number(*g.max);
    return j;
}

ordered_json config_json(const RunConfig& cfg, const MaskingResult& result) {
    ordered_json j;
    j["wavelet"] = result.decomposition.filters.name();
    j["level"] = result.decomposition.level;
    ordered_json offset;
    if (cfg.paper_repro && !cfg.offset_given) {
        offset = report_number(2500.0);
    } else {
        offset = cfg.offset.kind == OffsetPolicy::Kind::Auto ? ordered_json("auto")
                                                              : ordered_json(report_number(cfg.offset.value));
    }
    j["offset"] = offset;
    j["sum_repair"] = cfg.paper_repro && !cfg.repair_given ? false : cfg.sum_repair;
    j["seed"] = cfg.seed;
    j["lp_mode"] = cfg.lp_mode == SolveMode::Optimize ? "optimize" : "feasibility";
    j["paper_repro"] = cfg.paper_repro;
    j["override_coeffs"] = cfg.override_coeffs ? numbers(*cfg.override_coeffs) : ordered_json(nullptr);
    j["input"] = cfg.input;
    return j;
}

}  // namespace

double report_number(double value) {
    if (!std::isfinite(value)) return value;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    const double rounded = std::strtod(buf, nullptr);
    return rounded == 0.0 ? 0.0 : rounded;
}

ordered_json lp_to_json(const LinearProgram& lp) {
    ordered_json j;
    j["num_vars"] = lp.num_vars;
    ordered_json rows = ordered_json::array();
    for (const auto& row : lp.rows) {
        ordered_json r;
        r["label"] = row.label;
        r["coeffs"] = numbers(row.coeffs);
        r["relation"] = to_string(row.relation);
        r["rhs"] = report_number(row.rhs);
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    if (lp.objective) {
        j["objective"] = {{"sense", lp.objective->sense == Sense::Maximize ? "maximize" : "minimize"},
                          {"coeffs", numbers(lp.objective->coeffs)}};
    }
    if (!lp.bounds.empty()) {
        ordered_json bounds = ordered_json::array();
        for (const auto& b : lp.bounds) {
            bounds.push_back({std::isfinite(b.lower) ? ordered_json(report_number(b.lower)) : ordered_json(nullptr),
                              std::isfinite(b.upper) ? ordered_json(report_number(b.upper)) : ordered_json(nullptr)});
        }
        j["bounds"] = std::move(bounds);
    }
    return j;
}

ordered_json build_report(const RunConfig& cfg, const MaskingResult& result) {
    const auto& dec = result.decomposition;
    const auto& as = result.assembled;
    ordered_json r;
    r["generated_at"] = timestamp();
    r["tool"] = "wavemask";
    r["version"] = WAVEMASK_VERSION;
    r["command"] = command_name(cfg.command);
    r["config"] = config_json(cfg, result);

    r["filter"] = {{"name", dec.filters.name()},
                   {"lowpass", numbers(dec.filters.lowpass)},
                   {"highpass", numbers(dec.filters.highpass)}};
    r["q"] = numbers(result.q.values());
    r["a_k"] = numbers(dec.approx);
    ordered_json details = ordered_json::array();
    for (int j = 1; j <= dec.level; ++j) {
        details.push_back({{"level", j}, {"coeffs", numbers(dec.detail(j))}});
    }
    r["details"] = std::move(details);
    r["A_k"] = numbers(result.approximation);

    ordered_json wrm = ordered_json::array();
    for (std::size_t i = 0; i < result.wrm.rows(); ++i) wrm.push_back(numbers(result.wrm.row(i)));
    r["wrm"] = std::move(wrm);

    ordered_json goals = ordered_json::array();
    const GoalSpec spec = GoalSpec::from_entries(result.q.size(), cfg.goal_entries);
    for (std::size_t i = 1; i <= spec.size(); ++i) {
        if (spec.at(i).kind != GoalKind::Free) goals.push_back(goal_json(i, spec.at(i)));
    }
    r["goals"] = std::move(goals);

    ordered_json lp = lp_to_json(result.lp);
    if (result.used_override) {
        lp["solver"] = "override";
    } else {
        lp["solver"] = cfg.lp_mode == SolveMode::Optimize ? "simplex-optimize" : "simplex-feasibility";
    }
    lp["max_violation"] = report_number(max_violation(result.lp, result.new_coeffs));
    r["lp"] = std::move(lp);

    r["a_hat"] = numbers(result.new_coeffs);
    r["A_hat"] = numbers(as.new_approximation);
    r["q_hat"] = numbers(as.q_hat);
    r["offset"] = report_number(as.offset);
    r["q_hathat"] = numbers(as.q_hathat);
    r["c"] = report_number(as.scale);
    r["q_scaled"] = numbers(as.q_scaled);
    r["q_tilde"] = result.q_tilde;

    ordered_json checks = ordered_json::array();
    for (const auto& g : result.goal_checks) {
        checks.push_back({{"index", g.index},
                          {"goal", to_string(g.kind)},
                          {"original", report_number(g.original)},
                          {"masked", report_number(g.masked)},
                          {"lower", optional_number(g.lower)},
                          {"upper", optional_number(g.upper)},
                          {"tolerance", report_number(g.tolerance)},
                          {"satisfied", g.satisfied}});
    }
    r["goal_checks"] = std::move(checks);

    std::int64_t tilde_sum = 0;
    for (auto v : result.q_tilde) tilde_sum += v;
    double scaled_sum = 0.0;
    for (double v : as.q_scaled) scaled_sum += v;
    r["sum_check"] = {{"sum_q", report_number(result.q.sum())},
                      {"sum_q_scaled", report_number(scaled_sum)},
                      {"sum_q_tilde", tilde_sum},
                      {"preserved", result.sum_preserved}};
    return r;
}

}  // namespace wavemask::cli
