#include "wavemask/lp.hpp"

#include <algorithm>
#include <cmath>

#include "wavemask/error.hpp"

namespace wavemask {

namespace {

constexpr std::size_t kIterationGuard = 200000;

// x_j = offset + sum over (column, sign) of sign * y_column, with y >= 0.
struct VariableMap {
    double offset = 0.0;
    std::vector<std::pair<std::size_t, double>> columns;
};

struct StandardRow {
    std::vector<double> coeffs;  // over structural columns
    Relation relation;
    double rhs;
};

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

    [[nodiscard]] std::size_t rows() const noexcept { return basis_.size(); }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    [[nodiscard]] double rhs(std::size_t r) const { return at(r, cols_); }
    std::vector<std::size_t>& basis() { return basis_; }
    [[nodiscard]] const std::vector<std::size_t>& basis() const { return basis_; }

    void pivot(std::size_t pr, std::size_t pc, std::vector<double>& cost_row) {
        const double p = at(pr, pc);
        for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r < rows(); ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
        const double f = cost_row[pc];
        if (f != 0.0) {
            for (std::size_t c = 0; c <= cols_; ++c) cost_row[c] -= f * at(pr, c);
            cost_row[pc] = 0.0;
        }
        basis_[pr] = pc;
    }

    void remove_row(std::size_t r) {
        data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1)),
                    data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (cols_ + 1)));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    }

private:
    std::size_t cols_;
    std::vector<double> data_;
    std::vector<std::size_t> basis_;
};

// Reduced-cost row (size cols + 1, last entry = -objective) for minimizing cost.
std::vector<double> reduced_costs(const Tableau& t, const std::vector<double>& cost) {
    std::vector<double> row(t.cols() + 1, 0.0);
    for (std::size_t c = 0; c < t.cols(); ++c) row[c] = cost[c];
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const double cb = cost[t.basis()[r]];
        if (cb == 0.0) continue;
        for (std::size_t c = 0; c <= t.cols(); ++c) row[c] -= cb * t.at(r, c);
    }
    return row;
}

enum class PhaseOutcome { Optimal, Unbounded };

// Bland's rule: lowest-index improving column enters; min-ratio row with the
// lowest basic index leaves.
PhaseOutcome run_simplex(Tableau& t, std::vector<double>& cost_row, const std::vector<bool>& allowed,
                         const SimplexTolerances& tol, std::size_t& iterations) {
    for (;;) {
        if (++iterations > kIterationGuard) throw InternalError("simplex iteration guard exceeded");
        std::size_t entering = t.cols();
        for (std::size_t c = 0; c < t.cols(); ++c) {
            if (allowed[c] && cost_row[c] < -tol.pivot) {
                entering = c;
                break;
            }
        }
        if (entering == t.cols()) return PhaseOutcome::Optimal;

        std::size_t leaving = t.rows();
        double best_ratio = 0.0;
        for (std::size_t r = 0; r < t.rows(); ++r) {
            const double a = t.at(r, entering);
            if (a <= tol.pivot) continue;
            const double ratio = std::max(t.rhs(r), 0.0) / a;
            if (leaving == t.rows() || ratio < best_ratio - 1e-12 * std::max(1.0, best_ratio) ||
                (std::abs(ratio - best_ratio) <= 1e-12 * std::max(1.0, best_ratio) &&
                 t.basis()[r] < t.basis()[leaving])) {
                leaving = r;
                best_ratio = ratio;
            }
        }
        if (leaving == t.rows()) return PhaseOutcome::Unbounded;
        t.pivot(leaving, entering, cost_row);
    }
}

}  // namespace

void LinearProgram::validate() const {
    if (num_vars == 0) throw ConfigError("linear program needs at least one variable");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.coeffs.size() != num_vars) {
            throw ConfigError("row " + std::to_string(i + 1) + " has " + std::to_string(row.coeffs.size()) +
                              " coefficients, expected " + std::to_string(num_vars));
        }
        if (!std::isfinite(row.rhs)) throw ConfigError("row " + std::to_string(i + 1) + " has a non-finite rhs");
        for (double a : row.coeffs) {
            if (!std::isfinite(a)) throw ConfigError("row " + std::to_string(i + 1) + " has a non-finite coefficient");
        }
    }
    if (!bounds.empty() && bounds.size() != num_vars) throw ConfigError("bounds must cover every variable");
    for (const auto& b : bounds) {
        if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower == std::numeric_limits<double>::infinity() ||
            b.upper == -std::numeric_limits<double>::infinity()) {
            throw ConfigError("invalid variable bound");
        }
    }
    if (objective && objective->coeffs.size() != num_vars) throw ConfigError("objective length mismatch");
}

double row_activity(const LpRow& row, std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < row.coeffs.size(); ++j) acc += row.coeffs[j] * x[j];
    return acc - row.rhs;
}

double row_violation(const LpRow& row, std::span<const double> x) {
    const double a = row_activity(row, x);
    switch (row.relation) {
        case Relation::LessEqual: return std::max(0.0, a);
        case Relation::GreaterEqual: return std::max(0.0, -a);
        case Relation::Equal: return std::abs(a);
    }
    return 0.0;
}

double max_violation(const LinearProgram& lp, std::span<const double> x) {
    if (x.size() != lp.num_vars) throw ShapeError("point dimension does not match the linear program");
    double worst = 0.0;
    for (const auto& row : lp.rows) worst = std::max(worst, row_violation(row, x));
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        const auto b = lp.bound(j);
        worst = std::max({worst, b.lower - x[j], x[j] - b.upper});
    }
    return worst;
}

LpSolution solve(const LinearProgram& lp, SolveMode mode, SimplexTolerances tol) {
    lp.validate();
    if (mode == SolveMode::Optimize && !lp.objective) throw ConfigError("optimize mode needs an objective");

    LpSolution solution;

    // Map original variables onto non-negative structural columns.
    std::vector<VariableMap> maps(lp.num_vars);
    std::vector<StandardRow> std_rows;
    std::size_t structural = 0;
    std::vector<std::pair<std::size_t, double>> box_rows;  // (column, width)
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        const auto b = lp.bound(j);
        const bool has_lower = std::isfinite(b.lower);
        const bool has_upper = std::isfinite(b.upper);
        if (has_lower && has_upper && b.lower > b.upper) return solution;
        if (has_lower) {
            maps[j].offset = b.lower;
            maps[j].columns.emplace_back(structural, 1.0);
            if (has_upper) box_rows.emplace_back(structural, b.upper - b.lower);
            ++structural;
        } else if (has_upper) {
            maps[j].offset = b.upper;
            maps[j].columns.emplace_back(structural++, -1.0);
        } else {
            maps[j].columns.emplace_back(structural++, 1.0);
            maps[j].columns.emplace_back(structural++, -1.0);
        }
    }

    for (const auto& row : lp.rows) {
        StandardRow sr{std::vector<double>(structural, 0.0), row.relation, row.rhs};
        for (std::size_t j = 0; j < lp.num_vars; ++j) {
            sr.rhs -= row.coeffs[j] * maps[j].offset;
            for (auto [col, sign] : maps[j].columns) sr.coeffs[col] += sign * row.coeffs[j];
        }
        std_rows.push_back(std::move(sr));
    }
    for (auto [col, width] : box_rows) {
        StandardRow sr{std::vector<double>(structural, 0.0), Relation::LessEqual, width};
        sr.coeffs[col] = 1.0;
        std_rows.push_back(std::move(sr));
    }
    for (auto& sr : std_rows) {
        if (sr.rhs < 0.0) {
            sr.rhs = -sr.rhs;
            for (double& a : sr.coeffs) a = -a;
            if (sr.relation == Relation::LessEqual) {
                sr.relation = Relation::GreaterEqual;
            } else if (sr.relation == Relation::GreaterEqual) {
                sr.relation = Relation::LessEqual;
            }
        }
    }

    // Column layout: structural | slack/surplus | artificial.
    std::size_t slacks = 0;
    std::size_t artificials = 0;
    for (const auto& sr : std_rows) {
        if (sr.relation != Relation::Equal) ++slacks;
        if (sr.relation != Relation::LessEqual) ++artificials;
    }
    const std::size_t first_slack = structural;
    const std::size_t first_artificial = structural + slacks;
    const std::size_t total_cols = first_artificial + artificials;

    Tableau t(std_rows.size(), total_cols);
    double rhs_scale = 1.0;
    {
        std::size_t s = first_slack;
        std::size_t a = first_artificial;
        for (std::size_t r = 0; r < std_rows.size(); ++r) {
            const auto& sr = std_rows[r];
            for (std::size_t c = 0; c < structural; ++c) t.at(r, c) = sr.coeffs[c];
            t.rhs(r) = sr.rhs;
            rhs_scale = std::max(rhs_scale, sr.rhs);
            switch (sr.relation) {
                case Relation::LessEqual:
                    t.at(r, s) = 1.0;
                    t.basis()[r] = s++;
                    break;
                case Relation::GreaterEqual:
                    t.at(r, s++) = -1.0;
                    t.at(r, a) = 1.0;
                    t.basis()[r] = a++;
                    break;
                case Relation::Equal:
                    t.at(r, a) = 1.0;
                    t.basis()[r] = a++;
                    break;
            }
        }
    }

    // Phase 1: minimize the sum of artificials.
    std::vector<bool> allowed(total_cols, true);
    {
        std::vector<double> cost(total_cols, 0.0);
        for (std::size_t c = first_artificial; c < total_cols; ++c) cost[c] = 1.0;
        auto cost_row = reduced_costs(t, cost);
        run_simplex(t, cost_row, allowed, tol, solution.iterations);
        const double infeasibility = -cost_row[total_cols];
        if (infeasibility > tol.feasibility + 1e-11 * rhs_scale) return solution;
    }

    // Drive remaining (zero-valued) artificials out of the basis.
    for (std::size_t r = t.rows(); r-- > 0;) {
        if (t.basis()[r] < first_artificial) continue;
        std::size_t col = first_artificial;
        for (std::size_t c = 0; c < first_artificial; ++c) {
            if (std::abs(t.at(r, c)) > tol.pivot) {
                col = c;
                break;
            }
        }
        if (col == first_artificial) {
            t.remove_row(r);
        } else {
            std::vector<double> dummy(total_cols + 1, 0.0);
            t.pivot(r, col, dummy);
        }
    }
    for (std::size_t c = first_artificial; c < total_cols; ++c) allowed[c] = false;

    auto extract = [&]() {
        std::vector<double> y(total_cols, 0.0);
        for (std::size_t r = 0; r < t.rows(); ++r) y[t.basis()[r]] = std::max(t.rhs(r), 0.0);
        std::vector<double> x(lp.num_vars, 0.0);
        for (std::size_t j = 0; j < lp.num_vars; ++j) {
            x[j] = maps[j].offset;
            for (auto [col, sign] : maps[j].columns) x[j] += sign * y[col];
        }
        return x;
    };

    if (mode == SolveMode::Feasibility) {
        solution.status = LpStatus::Feasible;
        solution.x = extract();
        return solution;
    }

    // Phase 2: minimize the (sign-adjusted) user objective.
    const double sense = lp.objective->sense == Sense::Maximize ? -1.0 : 1.0;
    std::vector<double> cost(total_cols, 0.0);
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        for (auto [col, sign] : maps[j].columns) cost[col] += sense * sign * lp.objective->coeffs[j];
    }
    auto cost_row = reduced_costs(t, cost);
    if (run_simplex(t, cost_row, allowed, tol, solution.iterations) == PhaseOutcome::Unbounded) {
        solution.status = LpStatus::Unbounded;
        return solution;
    }
    solution.status = LpStatus::Optimal;
    solution.x = extract();
    double value = 0.0;
    for (std::size_t j = 0; j < lp.num_vars; ++j) value += lp.objective->coeffs[j] * solution.x[j];
    solution.objective_value = value;
    return solution;
}

std::string to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Feasible: return "feasible";
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

std::string to_string(Relation relation) {
    switch (relation) {
        case Relation::LessEqual: return "<=";
        case Relation::GreaterEqual: return ">=";
        case Relation::Equal: return "=";
    }
    return "?";
}

}  // namespace wavemask
