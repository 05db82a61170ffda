#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "wavemask/error.hpp"

namespace wavemask::cli {

namespace {

using nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << text;
    if (!out) throw DataError("write failed for '" + path + "'");
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void write_counts(std::ostream& out, const std::vector<std::int64_t>& counts) {
    for (auto v : counts) out << v << '\n';
}

void emit_signal_outputs(const RunConfig& cfg, const MaskingResult& result, std::ostream& out) {
    if (cfg.output.empty()) {
        write_counts(out, result.q_tilde);
    } else {
        std::ostringstream os;
        write_counts(os, result.q_tilde);
        write_text(cfg.output, os.str());
    }
    if (!cfg.scaled_output.empty()) write_signal_file(cfg.scaled_output, result.assembled.q_scaled);
    if (!cfg.dump_lp.empty()) write_text(cfg.dump_lp, dump(lp_to_json(result.lp)));
}

void warn_unsatisfied(const MaskingResult& result, std::ostream& err) {
    for (const auto& g : result.goal_checks) {
        if (!g.satisfied) err << "warning: goal at position " << g.index << " is not met\n";
    }
    if (!result.sum_preserved) err << "warning: integer total differs from the original total\n";
    double moved = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < result.new_coeffs.size(); ++i) {
        moved = std::max(moved, std::abs(result.new_coeffs[i] - result.decomposition.approx[i]));
        scale = std::max(scale, std::abs(result.decomposition.approx[i]));
    }
    if (moved <= 1e-9 * scale) {
        err << "warning: the new approximation equals the original; goals are met without change "
               "(use --lp-mode optimize, explicit thresholds or --override-coeffs)\n";
    }
}

int run_mask_signal(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.input.empty()) throw UsageError("mask-signal needs --input");
    const Signal q = read_signal_file(cfg.input);
    const MaskingResult result = mask_signal(q, cfg.masking_config(q.size()));
    emit_signal_outputs(cfg, result, out);
    if (!cfg.report.empty()) write_text(cfg.report, dump(build_report(cfg, result)));
    warn_unsatisfied(result, err);
    return kSuccess;
}

int run_mask_microfile(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.input.empty()) throw UsageError("mask-microfile needs --input");
    if (!cfg.selection) throw UsageError("mask-microfile needs a selection (--selection or --vital/--parameter)");
    const MicrofileTable table = load_csv_file(cfg.input, cfg.csv);
    const Signal q = extract_quantity_signal(table, *cfg.selection);
    const MaskingResult result = mask_signal(q, cfg.masking_config(q.size()));
    const ModificationPlan plan = plan_resynthesis(table, *cfg.selection, q, result.q_tilde, cfg.seed);
    const MicrofileTable masked = apply_plan(table, plan);

    if (cfg.output.empty()) {
        write_csv(masked, out, cfg.csv);
    } else {
        write_csv_file(masked, cfg.output, cfg.csv);
    }
    if (!cfg.scaled_output.empty()) write_signal_file(cfg.scaled_output, result.assembled.q_scaled);
    if (!cfg.dump_lp.empty()) write_text(cfg.dump_lp, dump(lp_to_json(result.lp)));
    if (!cfg.report.empty()) {
        ordered_json report = build_report(cfg, result);
        ordered_json moves = ordered_json::array();
        for (const auto& m : plan.moves) moves.push_back({{"record", m.record}, {"from", m.from}, {"to", m.to}});
        report["microfile"] = {{"records", table.num_records()},
                               {"attributes", table.num_attributes()},
                               {"parameter_attribute", plan.parameter_attribute},
                               {"parameter_values", cfg.selection->parameter_values},
                               {"seed", plan.seed},
                               {"moves", std::move(moves)}};
        write_text(cfg.report, dump(report));
    }
    warn_unsatisfied(result, err);
    return kSuccess;
}

int run_wrm(const RunConfig& cfg, std::ostream& out) {
    if (cfg.length == 0) throw UsageError("wrm needs --length");
    const ReconstructionMatrix wrm = build_wrm(cfg.length, cfg.level, parse_filter(cfg.wavelet));
    if (cfg.output.empty()) {
        write_wrm_csv(out, wrm);
    } else {
        std::ostringstream os;
        write_wrm_csv(os, wrm);
        write_text(cfg.output, os.str());
    }
    return kSuccess;
}

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

std::vector<Check> verify_signals(const Signal& original, const Signal& masked, const FilterPair& filters, int level,
                                  double detail_tol) {
    std::vector<Check> checks;
    if (original.size() != masked.size()) {
        checks.push_back({"length", false, std::to_string(original.size()) + " vs " + std::to_string(masked.size())});
        return checks;
    }
    checks.push_back({"length", true, std::to_string(original.size())});

    const double so = original.sum();
    const double sm = masked.sum();
    const double sum_err = std::abs(sm - so) / std::max(1.0, std::abs(so));
    checks.push_back({"sum", sum_err <= 1e-9, format_double(so) + " vs " + format_double(sm)});

    checks.push_back({"non-negative", masked.min() >= 0.0, "min " + format_double(masked.min())});

    const Decomposition dq = decompose(original, filters, level);
    const Decomposition dm = decompose(masked, filters, level);
    double num = 0.0;
    double den = 0.0;
    double scale_ref = 0.0;
    for (int j = 1; j <= level; ++j) {
        const auto& a = dq.detail(j);
        const auto& b = dm.detail(j);
        for (std::size_t i = 0; i < a.size(); ++i) {
            num += a[i] * b[i];
            den += a[i] * a[i];
            scale_ref = std::max(scale_ref, std::abs(b[i]));
        }
    }
    const double c = den > 0.0 ? num / den : 0.0;
    double worst = 0.0;
    for (int j = 1; j <= level; ++j) {
        const auto& a = dq.detail(j);
        const auto& b = dm.detail(j);
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(b[i] - c * a[i]));
    }
    const double rel = scale_ref > 0.0 ? worst / scale_ref : worst;
    checks.push_back({"detail-proportionality", rel <= detail_tol,
                      "c=" + format_double(c) + " max relative deviation " + format_double(rel)});
    return checks;
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
    if (cfg.original.empty() || cfg.masked.empty()) throw UsageError("verify needs --original and --masked");
    const FilterPair filters = parse_filter(cfg.wavelet);
    std::vector<Check> checks;
    if (cfg.selection) {
        const MicrofileTable a = load_csv_file(cfg.original, cfg.csv);
        const MicrofileTable b = load_csv_file(cfg.masked, cfg.csv);
        checks.push_back({"record-count", a.num_records() == b.num_records(),
                          std::to_string(a.num_records()) + " vs " + std::to_string(b.num_records())});
        auto more = verify_signals(extract_quantity_signal(a, *cfg.selection), extract_quantity_signal(b, *cfg.selection),
                                   filters, cfg.level, cfg.detail_tolerance);
        checks.insert(checks.end(), more.begin(), more.end());
    } else {
        checks = verify_signals(read_signal_file(cfg.original), read_signal_file(cfg.masked), filters, cfg.level,
                                cfg.detail_tolerance);
    }
    bool all = true;
    for (const auto& c : checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        all = all && c.pass;
    }
    return all ? kSuccess : kVerifyFailed;
}

void add_masking_flags(CLI::App* app, std::string& wavelet, int& level, std::string& goals, std::string& offset,
                       bool& no_repair, std::uint64_t& seed, std::string& override_coeffs, bool& paper_repro,
                       std::string& config) {
    app->add_option("--config", config, "JSON config file");
    app->add_option("--wavelet", wavelet, "filter, e.g. daubechies:2");
    app->add_option("--level", level, "decomposition level k");
    app->add_option("--goals", goals, "JSON goal file");
    app->add_option("--offset", offset, "auto or a non-negative integer");
    app->add_flag("--no-repair", no_repair, "skip the +-1 sum repair after rounding");
    app->add_option("--seed", seed, "seed for record selection");
    app->add_option("--override-coeffs", override_coeffs, "comma-separated new approximation coefficients");
    app->add_flag("--paper-repro", paper_repro, "fixed offset 2500 and no repair unless overridden");
}

}  // namespace

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out) {
    CLI::App app{"Wavelet-based masking of categorical microdata counts", "wavemask"};
    app.require_subcommand(1);

    std::string config, input, output, scaled_output, report, dump_lp, wavelet, goals, offset, override_coeffs;
    std::string selection, parameter, parameter_values, delimiter, original, masked, lp_mode;
    std::vector<std::string> vital;
    int level = 1;
    bool no_repair = false;
    bool paper_repro = false;
    std::uint64_t seed = 0;
    std::size_t length = 0;
    double detail_tol = 1e-6;

    auto* sig = app.add_subcommand("mask-signal", "mask a quantity signal file");
    auto* mic = app.add_subcommand("mask-microfile", "mask a CSV microfile");
    auto* wrm = app.add_subcommand("wrm", "write the reconstruction matrix as CSV");
    auto* ver = app.add_subcommand("verify", "check total and detail proportionality");

    for (auto* sub : {sig, mic}) {
        add_masking_flags(sub, wavelet, level, goals, offset, no_repair, seed, override_coeffs, paper_repro, config);
        sub->add_option("--input", input, "input file");
        sub->add_option("--output", output, "masked output (stdout when omitted)");
        sub->add_option("--scaled-output", scaled_output, "real-valued masked signal before rounding");
        sub->add_option("--report", report, "JSON report path");
        sub->add_option("--dump-lp", dump_lp, "write the constraint system as JSON");
        sub->add_option("--lp-mode", lp_mode, "feasibility or optimize");
    }
    for (auto* sub : {mic, ver}) {
        sub->add_option("--selection", selection, "JSON selection file");
        sub->add_option("--vital", vital, "vital attribute as NAME=VALUE (repeatable)");
        sub->add_option("--parameter", parameter, "parameter attribute");
        sub->add_option("--parameter-values", parameter_values, "comma-separated parameter values in order");
        sub->add_option("--delimiter", delimiter, "CSV delimiter character");
    }
    wrm->add_option("--config", config, "JSON config file");
    wrm->add_option("--length", length, "signal length m");
    wrm->add_option("--wavelet", wavelet, "filter, e.g. daubechies:2");
    wrm->add_option("--level", level, "decomposition level k");
    wrm->add_option("--output", output, "CSV path (stdout when omitted)");
    ver->add_option("--config", config, "JSON config file");
    ver->add_option("--original", original, "original signal or CSV");
    ver->add_option("--masked", masked, "masked signal or CSV");
    ver->add_option("--wavelet", wavelet, "filter, e.g. daubechies:2");
    ver->add_option("--level", level, "decomposition level k");
    ver->add_option("--detail-tol", detail_tol, "relative tolerance for detail proportionality");

    std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    CLI::App* sub = app.get_subcommands().front();
    RunConfig cfg;
    if (sub == sig) cfg.command = Command::MaskSignal;
    if (sub == mic) cfg.command = Command::MaskMicrofile;
    if (sub == wrm) cfg.command = Command::Wrm;
    if (sub == ver) cfg.command = Command::Verify;

    auto given = [&](const char* name) {
        try {
            return sub->get_option(name)->count() > 0;
        } catch (const CLI::OptionNotFound&) {
            return false;
        }
    };

    if (given("--config")) {
        std::ifstream in(config);
        if (!in) throw ConfigError("cannot open config file '" + config + "'");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config file '" + config + "' is not valid JSON: " + e.what());
        }
        const Command command = cfg.command;
        apply_config_json(j, cfg);
        cfg.command = command;
    }

    if (given("--input")) cfg.input = input;
    if (given("--output")) cfg.output = output;
    if (given("--scaled-output")) cfg.scaled_output = scaled_output;
    if (given("--report")) cfg.report = report;
    if (given("--dump-lp")) cfg.dump_lp = dump_lp;
    if (given("--original")) cfg.original = original;
    if (given("--masked")) cfg.masked = masked;
    if (given("--detail-tol")) cfg.detail_tolerance = detail_tol;
    if (given("--length")) cfg.length = length;
    if (given("--wavelet")) cfg.wavelet = wavelet;
    if (given("--level")) cfg.level = level;
    if (given("--goals")) {
        cfg.goal_entries = load_goals_file(goals);
        cfg.goals_given = true;
    }
    if (given("--offset")) {
        cfg.offset = parse_offset(offset);
        cfg.offset_given = true;
    }
    if (given("--no-repair")) {
        cfg.sum_repair = false;
        cfg.repair_given = true;
    }
    if (given("--seed")) cfg.seed = seed;
    if (given("--override-coeffs")) cfg.override_coeffs = parse_number_list(override_coeffs);
    if (given("--paper-repro")) cfg.paper_repro = true;
    if (given("--lp-mode")) {
        if (lp_mode == "feasibility") {
            cfg.lp_mode = SolveMode::Feasibility;
        } else if (lp_mode == "optimize") {
            cfg.lp_mode = SolveMode::Optimize;
        } else {
            throw UsageError("--lp-mode must be feasibility or optimize");
        }
    }
    if (given("--delimiter")) {
        if (delimiter.size() != 1) throw UsageError("--delimiter must be a single character");
        cfg.csv.delimiter = delimiter[0];
    }
    if (given("--selection")) cfg.selection = load_selection_file(selection);
    if (given("--vital") || given("--parameter") || given("--parameter-values")) {
        SelectionSpec spec = cfg.selection.value_or(SelectionSpec{});
        if (given("--vital")) {
            spec.vital_attributes.clear();
            spec.vital_combination.clear();
            for (const auto& v : vital) {
                const auto eq = v.find('=');
                if (eq == std::string::npos || eq == 0) throw UsageError("--vital expects NAME=VALUE, got '" + v + "'");
                spec.vital_attributes.push_back(v.substr(0, eq));
                spec.vital_combination.push_back(v.substr(eq + 1));
            }
        }
        if (given("--parameter")) spec.parameter_attribute = parameter;
        if (given("--parameter-values")) {
            spec.parameter_values.clear();
            std::stringstream ss(parameter_values);
            for (std::string item; std::getline(ss, item, ',');) spec.parameter_values.push_back(item);
        }
        spec.validate();
        cfg.selection = std::move(spec);
    }
    return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    switch (cfg.command) {
        case Command::MaskSignal: return run_mask_signal(cfg, out, err);
        case Command::MaskMicrofile: return run_mask_microfile(cfg, out, err);
        case Command::Wrm: return run_wrm(cfg, out);
        case Command::Verify: return run_verify(cfg, out);
    }
    return kUsageError;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const auto cfg = parse_args(args, out);
        if (!cfg) return kSuccess;
        return run(*cfg, out, err);
    } catch (const InfeasibleGoalsError& e) {
        err << "wavemask: " << e.what() << '\n';
        return kInfeasible;
    } catch (const MaskingError& e) {
        err << "wavemask: " << e.what() << '\n';
        return kInfeasible;
    } catch (const DataError& e) {
        err << "wavemask: " << e.what() << '\n';
        return kDataError;
    } catch (const ConfigError& e) {
        err << "wavemask: " << e.what() << '\n';
        return kUsageError;
    } catch (const ShapeError& e) {
        err << "wavemask: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "wavemask: internal error: " << e.what() << '\n';
        return kDataError;
    }
}

}  // namespace wavemask::cli
