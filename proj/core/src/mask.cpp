#include "wavemask/mask.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wavemask/error.hpp"

namespace wavemask {

namespace {

constexpr double kGoalTolerance = 1e-7;

}  // namespace

GoalSpec GoalSpec::from_entries(std::size_t length, const std::vector<Entry>& entries) {
    GoalSpec spec(length);
    std::vector<bool> seen(length, false);
    for (const auto& e : entries) {
        if (e.index < 1 || e.index > length) {
            throw ConfigError("goal index " + std::to_string(e.index) + " outside 1.." + std::to_string(length));
        }
        if (seen[e.index - 1]) throw ConfigError("goal index " + std::to_string(e.index) + " given twice");
        seen[e.index - 1] = true;
        spec.set(e.index, e.goal);
    }
    return spec;
}

void GoalSpec::set(std::size_t index, Goal goal) {
    if (index < 1 || index > goals_.size()) {
        throw ConfigError("goal index " + std::to_string(index) + " outside 1.." + std::to_string(goals_.size()));
    }
    if (goal.kind == GoalKind::Bound && !goal.min && !goal.max) {
        throw ConfigError("bound goal at index " + std::to_string(index) + " needs min and/or max");
    }
    if (goal.kind == GoalKind::Bound && goal.min && goal.max && *goal.min > *goal.max) {
        throw ConfigError("bound goal at index " + std::to_string(index) + " has min > max");
    }
    goals_[index - 1] = goal;
}

const Goal& GoalSpec::at(std::size_t index) const {
    if (index < 1 || index > goals_.size()) throw ConfigError("goal index out of range");
    return goals_[index - 1];
}

bool GoalSpec::all_free() const noexcept {
    return std::all_of(goals_.begin(), goals_.end(), [](const Goal& g) { return g.kind == GoalKind::Free; });
}

void MaskingConfig::validate() const {
    if (level < 1) throw ConfigError("level must be >= 1");
    if (offset.kind == OffsetPolicy::Kind::Fixed && !(offset.value >= 0.0 && std::isfinite(offset.value))) {
        throw ConfigError("fixed offset must be a finite value >= 0");
    }
    if (!(override_slack >= 0.0)) throw ConfigError("override slack must be >= 0");
    if (lp_mode == SolveMode::Optimize && !override_coeffs) {
        if (!objective) throw ConfigError("optimize mode needs an objective");
        for (const auto& b : objective->coeff_bounds) {
            if (!std::isfinite(b.lower) || !std::isfinite(b.upper)) {
                throw ConfigError("optimize mode needs finite bounds on every coefficient");
            }
        }
    }
}

bool MaskingResult::all_goals_satisfied() const {
    return std::all_of(goal_checks.begin(), goal_checks.end(), [](const GoalCheck& c) { return c.satisfied; });
}

LinearProgram build_constraints(const ReconstructionMatrix& wrm, std::span<const double> approximation,
                                const GoalSpec& goals) {
    if (approximation.size() != wrm.rows() || goals.size() != wrm.rows()) {
        throw ShapeError("goal spec, approximation and reconstruction matrix lengths differ");
    }
    if (goals.all_free()) throw ConfigError("goal set is empty: at least one position must be constrained");

    LinearProgram lp;
    lp.num_vars = wrm.cols();
    auto add_row = [&](std::size_t r, Relation rel, double rhs, std::string label) {
        const auto row = wrm.row(r);
        lp.rows.push_back(LpRow{{row.begin(), row.end()}, rel, rhs, std::move(label)});
    };
    for (std::size_t i = 1; i <= goals.size(); ++i) {
        const Goal& g = goals.at(i);
        const std::string idx = std::to_string(i);
        switch (g.kind) {
            case GoalKind::Free: break;
            case GoalKind::Raise:
                add_row(i - 1, Relation::GreaterEqual, g.threshold.value_or(approximation[i - 1]), "raise[" + idx + "]");
                break;
            case GoalKind::Lower:
                add_row(i - 1, Relation::LessEqual, g.threshold.value_or(approximation[i - 1]), "lower[" + idx + "]");
                break;
            case GoalKind::Bound:
                if (g.min) add_row(i - 1, Relation::GreaterEqual, *g.min, "min[" + idx + "]");
                if (g.max) add_row(i - 1, Relation::LessEqual, *g.max, "max[" + idx + "]");
                break;
        }
    }
    return lp;
}

void attach_objective(LinearProgram& lp, const ReconstructionMatrix& wrm, const OptimizeObjective& objective) {
    if (objective.weights.size() != wrm.rows()) {
        throw ConfigError("objective needs " + std::to_string(wrm.rows()) + " weights, got " +
                          std::to_string(objective.weights.size()));
    }
    if (objective.coeff_bounds.size() != wrm.cols()) {
        throw ConfigError("objective needs bounds for all " + std::to_string(wrm.cols()) + " coefficients");
    }
    lp.objective = Objective{wrm.apply_transpose(objective.weights), objective.sense};
    lp.bounds = objective.coeff_bounds;
}

std::vector<double> solve_approximation(const LinearProgram& lp, const MaskingConfig& config) {
    if (config.override_coeffs) {
        const auto& coeffs = *config.override_coeffs;
        if (coeffs.size() != lp.num_vars) {
            throw ConfigError("override needs " + std::to_string(lp.num_vars) + " coefficients, got " +
                              std::to_string(coeffs.size()));
        }
        const double violation = max_violation(lp, coeffs);
        if (violation > config.override_slack) {
            throw InfeasibleGoalsError("override coefficients violate the goals by " + format_double(violation) +
                                       " (allowed slack " + format_double(config.override_slack) + ")");
        }
        return coeffs;
    }

    if (config.lp_mode == SolveMode::Optimize && !lp.objective) {
        throw ConfigError("optimize mode needs an objective attached to the linear program");
    }
    const LpSolution sol = solve(lp, config.lp_mode);
    switch (sol.status) {
        case LpStatus::Feasible:
        case LpStatus::Optimal: return sol.x;
        case LpStatus::Infeasible: throw InfeasibleGoalsError("goals unsatisfiable");
        case LpStatus::Unbounded: throw MaskingError("objective is unbounded over the goal region");
    }
    throw InternalError("unknown solver status");
}

AssembledSignal assemble_masked_signal(const Signal& q, const Decomposition& dec, const ReconstructionMatrix& wrm,
                                       std::span<const double> new_coeffs, const MaskingConfig& config) {
    if (dec.length != q.size() || wrm.rows() != q.size() || wrm.level() != dec.level) {
        throw ShapeError("signal, decomposition and reconstruction matrix are inconsistent");
    }
    AssembledSignal out;
    out.new_approximation = wrm.apply(new_coeffs);
    out.q_hat = out.new_approximation;
    for (int j = 1; j <= dec.level; ++j) {
        const auto detail = reconstruct_component(dec.detail(j), Band::detail(j), dec.length, dec.filters);
        for (std::size_t t = 0; t < out.q_hat.size(); ++t) out.q_hat[t] += detail[t];
    }

    const double lowest = *std::min_element(out.q_hat.begin(), out.q_hat.end());
    if (lowest < 0.0) {
        if (config.offset.kind == OffsetPolicy::Kind::Auto) {
            out.offset = std::ceil(-lowest);
        } else {
            out.offset = config.offset.value;
            if (lowest + out.offset < 0.0) {
                throw MaskingError("fixed offset " + format_double(out.offset) + " is too small; minimum of q_hat is " +
                                   format_double(lowest));
            }
        }
    }
    out.q_hathat.resize(out.q_hat.size());
    for (std::size_t t = 0; t < out.q_hat.size(); ++t) out.q_hathat[t] = out.q_hat[t] + out.offset;

    const double shifted_total = std::accumulate(out.q_hathat.begin(), out.q_hathat.end(), 0.0);
    if (!(shifted_total > 0.0)) throw MaskingError("degenerate scale: shifted signal sums to " + format_double(shifted_total));
    out.scale = q.sum() / shifted_total;
    out.q_scaled.resize(out.q_hathat.size());
    for (std::size_t t = 0; t < out.q_hathat.size(); ++t) out.q_scaled[t] = out.scale * out.q_hathat[t];
    return out;
}

AssembledSignal assemble_masked_signal(const Signal& q, const Decomposition& dec, std::span<const double> new_coeffs,
                                       const MaskingConfig& config) {
    return assemble_masked_signal(q, dec, build_wrm(dec.length, dec.level, dec.filters), new_coeffs, config);
}

std::vector<std::int64_t> round_and_repair(std::span<const double> q_scaled, std::int64_t target_sum,
                                           bool sum_repair) {
    std::vector<std::int64_t> rounded(q_scaled.size());
    for (std::size_t i = 0; i < q_scaled.size(); ++i) {
        if (!(q_scaled[i] >= 0.0) || !std::isfinite(q_scaled[i])) {
            throw MaskingError("cannot round: element " + std::to_string(i + 1) + " is negative or not finite");
        }
        rounded[i] = static_cast<std::int64_t>(std::llround(q_scaled[i]));
    }
    if (!sum_repair) return rounded;

    std::int64_t diff = target_sum - std::accumulate(rounded.begin(), rounded.end(), std::int64_t{0});
    if (target_sum < 0) throw MaskingError("target sum " + std::to_string(target_sum) + " unreachable without negatives");
    while (diff != 0) {
        const std::int64_t step = diff > 0 ? 1 : -1;
        // Largest residual in the needed direction; residuals within 1e-12 tie
        // and the lowest index wins.
        std::size_t pick = q_scaled.size();
        double best = 0.0;
        for (std::size_t i = 0; i < q_scaled.size(); ++i) {
            if (step < 0 && rounded[i] == 0) continue;
            const double residual = static_cast<double>(step) * (q_scaled[i] - static_cast<double>(rounded[i]));
            if (pick == q_scaled.size() || residual > best + 1e-12) {
                pick = i;
                best = residual;
            }
        }
        if (pick == q_scaled.size()) throw MaskingError("target sum unreachable without negatives");
        rounded[pick] += step;
        diff -= step;
    }
    return rounded;
}

std::vector<GoalCheck> check_goals(const GoalSpec& goals, std::span<const double> approximation,
                                   std::span<const double> new_approximation, double tolerance) {
    std::vector<GoalCheck> checks;
    for (std::size_t i = 1; i <= goals.size(); ++i) {
        const Goal& g = goals.at(i);
        if (g.kind == GoalKind::Free) continue;
        GoalCheck c;
        c.index = i;
        c.kind = g.kind;
        c.original = approximation[i - 1];
        c.masked = new_approximation[i - 1];
        c.tolerance = tolerance;
        switch (g.kind) {
            case GoalKind::Raise: c.lower = g.threshold.value_or(c.original); break;
            case GoalKind::Lower: c.upper = g.threshold.value_or(c.original); break;
            case GoalKind::Bound:
                c.lower = g.min;
                c.upper = g.max;
                break;
            case GoalKind::Free: break;
        }
        c.satisfied = (!c.lower || c.masked >= *c.lower - tolerance) && (!c.upper || c.masked <= *c.upper + tolerance);
        checks.push_back(c);
    }
    return checks;
}

MaskingResult mask_signal(const Signal& q, const MaskingConfig& config) {
    config.validate();
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < 0.0 || q[i] != std::round(q[i])) {
            throw DataError("signal element " + std::to_string(i + 1) + " is not a non-negative integer count");
        }
    }
    const FilterPair filters = make_filter(config.family, config.order);
    Decomposition dec = decompose(q, filters, config.level);
    ReconstructionMatrix wrm = build_wrm(q.size(), config.level, filters);
    std::vector<double> approximation = wrm.apply(dec.approx);

    LinearProgram lp = build_constraints(wrm, approximation, config.goals);
    if (config.lp_mode == SolveMode::Optimize && config.objective && !config.override_coeffs) {
        attach_objective(lp, wrm, *config.objective);
    }
    std::vector<double> coeffs = solve_approximation(lp, config);
    AssembledSignal assembled = assemble_masked_signal(q, dec, wrm, coeffs, config);

    const auto target = static_cast<std::int64_t>(std::llround(q.sum()));
    std::vector<std::int64_t> q_tilde = round_and_repair(assembled.q_scaled, target, config.sum_repair);
    const double tolerance = config.override_coeffs ? config.override_slack : kGoalTolerance;
    auto checks = check_goals(config.goals, approximation, assembled.new_approximation, tolerance);
    const bool sum_ok = std::accumulate(q_tilde.begin(), q_tilde.end(), std::int64_t{0}) == target;

    return MaskingResult{q,
                         std::move(dec),
                         std::move(wrm),
                         std::move(approximation),
                         std::move(lp),
                         config.override_coeffs.has_value(),
                         std::move(coeffs),
                         std::move(assembled),
                         std::move(q_tilde),
                         std::move(checks),
                         sum_ok};
}

std::string to_string(GoalKind kind) {
    switch (kind) {
        case GoalKind::Free: return "free";
        case GoalKind::Raise: return "raise";
        case GoalKind::Lower: return "lower";
        case GoalKind::Bound: return "bound";
    }
    return "free";
}

GoalKind parse_goal_kind(const std::string& text) {
    if (text == "free") return GoalKind::Free;
    if (text == "raise") return GoalKind::Raise;
    if (text == "lower") return GoalKind::Lower;
    if (text == "bound") return GoalKind::Bound;
    throw ConfigError("unknown goal '" + text + "' (expected raise, lower, free or bound)");
}

}  // namespace wavemask
