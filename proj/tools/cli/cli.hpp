#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wavemask/error.hpp"
#include "wavemask/mask.hpp"
#include "wavemask/microdata.hpp"

namespace wavemask::cli {

enum class Command { MaskSignal, MaskMicrofile, Wrm, Verify };

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kInfeasible = 2,
    kDataError = 3,
    kVerifyFailed = 4,
};

/// Everything one invocation needs, merged from the JSON config file and flags.
struct RunConfig {
    Command command = Command::MaskSignal;

    std::string input;
    std::string output;
    std::string scaled_output;
    std::string report;
    std::string dump_lp;

    // verify
    std::string original;
    std::string masked;
    double detail_tolerance = 1e-6;

    // wrm
    std::size_t length = 0;

    std::string wavelet = "daubechies:2";
    int level = 1;
    std::vector<GoalSpec::Entry> goal_entries;
    bool goals_given = false;
    OffsetPolicy offset;
    bool offset_given = false;
    bool sum_repair = true;
    bool repair_given = false;
    std::uint64_t seed = 0;
    std::optional<std::vector<double>> override_coeffs;
    SolveMode lp_mode = SolveMode::Feasibility;
    std::optional<OptimizeObjective> objective;
    bool paper_repro = false;

    std::optional<SelectionSpec> selection;
    CsvOptions csv;

    /// MaskingConfig for a signal of the given length, paper_repro applied.
    [[nodiscard]] MaskingConfig masking_config(std::size_t signal_length) const;
};

/// Thrown for malformed command lines.
class UsageError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

std::vector<GoalSpec::Entry> parse_goals(const nlohmann::json& j);
std::vector<GoalSpec::Entry> load_goals_file(const std::string& path);
SelectionSpec parse_selection(const nlohmann::json& j);
SelectionSpec load_selection_file(const std::string& path);
OffsetPolicy parse_offset(const std::string& text);
std::vector<double> parse_number_list(const std::string& text);

/// Applies keys from a JSON config object onto `cfg`.
void apply_config_json(const nlohmann::json& j, RunConfig& cfg);

/// Parses argv (argv[0] is the program name). Returns nullopt when help was printed.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out);

/// Executes a parsed configuration, returning the process exit status.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args + run with error-to-exit-code mapping.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// JSON report of a masking run; numbers carry 12 significant digits.
nlohmann::ordered_json build_report(const RunConfig& cfg, const MaskingResult& result);
nlohmann::ordered_json lp_to_json(const LinearProgram& lp);

/// Rounds to 12 significant digits.
double report_number(double value);

}  // namespace wavemask::cli
