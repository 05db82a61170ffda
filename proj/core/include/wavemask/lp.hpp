#pragma once

// Dense two-phase primal simplex with Bland's pivoting rule.
//
// Sized for the small systems produced by the masking pipeline (a handful of
// variables, tens of rows). Deterministic: identical input gives identical
// output.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wavemask {

enum class Relation { LessEqual, GreaterEqual, Equal };
enum class Sense { Minimize, Maximize };

struct LpRow {
    std::vector<double> coeffs;
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;
    std::string label;
};

struct Objective {
    std::vector<double> coeffs;
    Sense sense = Sense::Maximize;
};

struct VariableBounds {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
};

struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<LpRow> rows;
    std::optional<Objective> objective;
    /// Empty means every variable is free.
    std::vector<VariableBounds> bounds;

    /// Throws ConfigError when a row or bound is malformed.
    void validate() const;
    [[nodiscard]] VariableBounds bound(std::size_t j) const { return bounds.empty() ? VariableBounds{} : bounds[j]; }
};

enum class LpStatus { Feasible, Optimal, Infeasible, Unbounded };
enum class SolveMode { Feasibility, Optimize };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    std::optional<double> objective_value;
    std::size_t iterations = 0;

    [[nodiscard]] bool has_point() const noexcept {
        return status == LpStatus::Feasible || status == LpStatus::Optimal;
    }
};

struct SimplexTolerances {
    double pivot = 1e-9;
    double feasibility = 1e-7;
};

/// Feasibility mode returns the phase-1 basic point; optimize mode requires an objective.
LpSolution solve(const LinearProgram& lp, SolveMode mode, SimplexTolerances tol = {});

/// Signed value of a row's left-hand side minus its right-hand side.
double row_activity(const LpRow& row, std::span<const double> x);

/// Largest violation of any row or variable bound at x (0 when feasible).
double max_violation(const LinearProgram& lp, std::span<const double> x);

/// Per-row violation (>= 0).
double row_violation(const LpRow& row, std::span<const double> x);

std::string to_string(LpStatus status);
std::string to_string(Relation relation);

}  // namespace wavemask
