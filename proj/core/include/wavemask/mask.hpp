#pragma once

// Wavelet-approximation masking of a quantity signal.
//
// Pipeline: decompose q -> build M_rec -> constrain the new approximation
// coefficients with per-position goals -> solve -> add the untouched details
// back -> shift to non-negative -> rescale to the original total -> round.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavemask/lp.hpp"
#include "wavemask/signal.hpp"
#include "wavemask/wavelet.hpp"
#include "wavemask/wrm.hpp"

namespace wavemask {

enum class GoalKind { Free, Raise, Lower, Bound };

/// Target for the reconstructed approximation at one signal position.
/// Raise/Lower compare against `threshold`, defaulting to the current A_k(i).
struct Goal {
    GoalKind kind = GoalKind::Free;
    std::optional<double> threshold;
    std::optional<double> min;
    std::optional<double> max;

    static Goal free() { return {}; }
    static Goal raise(std::optional<double> threshold = std::nullopt) { return {GoalKind::Raise, threshold, {}, {}}; }
    static Goal lower(std::optional<double> threshold = std::nullopt) { return {GoalKind::Lower, threshold, {}, {}}; }
    static Goal bound(std::optional<double> min, std::optional<double> max) {
        return {GoalKind::Bound, std::nullopt, min, max};
    }
};

/// One goal per signal position, addressed 1-based.
class GoalSpec {
public:
    GoalSpec() = default;
    explicit GoalSpec(std::size_t length) : goals_(length) {}

    struct Entry {
        std::size_t index;  // 1-based
        Goal goal;
    };
    /// Positions not listed stay Free. Rejects out-of-range and repeated indices.
    static GoalSpec from_entries(std::size_t length, const std::vector<Entry>& entries);

    void set(std::size_t index, Goal goal);
    [[nodiscard]] const Goal& at(std::size_t index) const;
    [[nodiscard]] std::size_t size() const noexcept { return goals_.size(); }
    [[nodiscard]] bool all_free() const noexcept;

private:
    std::vector<Goal> goals_;
};

struct OffsetPolicy {
    enum class Kind { Auto, Fixed };
    Kind kind = Kind::Auto;
    double value = 0.0;

    static OffsetPolicy automatic() { return {}; }
    static OffsetPolicy fixed(double value) { return {Kind::Fixed, value}; }
};

/// Objective for optimize mode: weights over reconstructed signal positions,
/// plus a finite box on every new coefficient.
struct OptimizeObjective {
    Sense sense = Sense::Maximize;
    std::vector<double> weights;
    std::vector<VariableBounds> coeff_bounds;
};

struct MaskingConfig {
    WaveletFamily family = WaveletFamily::Daubechies;
    int order = 2;
    int level = 1;
    GoalSpec goals;
    OffsetPolicy offset;
    SolveMode lp_mode = SolveMode::Feasibility;
    std::optional<OptimizeObjective> objective;
    bool sum_repair = true;
    std::uint64_t rng_seed = 0;
    /// Bypasses the solver with caller-supplied coefficients (re-verified).
    std::optional<std::vector<double>> override_coeffs;
    double override_slack = 1.0;

    void validate() const;
};

struct GoalCheck {
    std::size_t index = 0;  // 1-based
    GoalKind kind = GoalKind::Free;
    double original = 0.0;  // A_k(i)
    double masked = 0.0;    // new A_k(i)
    std::optional<double> lower;
    std::optional<double> upper;
    double tolerance = 0.0;
    bool satisfied = false;
};

/// Stages from the new approximation through the rescaled real-valued signal.
struct AssembledSignal {
    std::vector<double> new_approximation;
    std::vector<double> q_hat;
    double offset = 0.0;
    std::vector<double> q_hathat;
    double scale = 1.0;
    std::vector<double> q_scaled;
};

struct MaskingResult {
    Signal q;
    Decomposition decomposition;
    ReconstructionMatrix wrm;
    std::vector<double> approximation;
    LinearProgram lp;
    bool used_override = false;
    std::vector<double> new_coeffs;
    AssembledSignal assembled;
    std::vector<std::int64_t> q_tilde;
    std::vector<GoalCheck> goal_checks;
    bool sum_preserved = false;

    [[nodiscard]] bool all_goals_satisfied() const;
};

/// One row per non-Free goal over the m / 2^k new coefficients.
LinearProgram build_constraints(const ReconstructionMatrix& wrm, std::span<const double> approximation,
                                const GoalSpec& goals);

/// Adds the optimize-mode objective and coefficient box to `lp`.
void attach_objective(LinearProgram& lp, const ReconstructionMatrix& wrm, const OptimizeObjective& objective);

/// New approximation coefficients: the override when given, else the solver's point.
std::vector<double> solve_approximation(const LinearProgram& lp, const MaskingConfig& config);

AssembledSignal assemble_masked_signal(const Signal& q, const Decomposition& dec, const ReconstructionMatrix& wrm,
                                       std::span<const double> new_coeffs, const MaskingConfig& config);
AssembledSignal assemble_masked_signal(const Signal& q, const Decomposition& dec, std::span<const double> new_coeffs,
                                       const MaskingConfig& config);

/// Half-away-from-zero rounding, then optional +-1 repair toward `target_sum`.
std::vector<std::int64_t> round_and_repair(std::span<const double> q_scaled, std::int64_t target_sum,
                                           bool sum_repair);

std::vector<GoalCheck> check_goals(const GoalSpec& goals, std::span<const double> approximation,
                                   std::span<const double> new_approximation, double tolerance);

MaskingResult mask_signal(const Signal& q, const MaskingConfig& config);

std::string to_string(GoalKind kind);
GoalKind parse_goal_kind(const std::string& text);

}  // namespace wavemask
