#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "cli.hpp"
#include "wavemask/error.hpp"

namespace wavemask::cli {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + what + " '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(what + " '" + path + "' is not valid JSON: " + e.what());
    }
}

double finite_number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError("'" + key + "' must be finite");
    return v;
}

std::vector<double> number_array(const json& j, const std::string& key) {
    if (!j.is_array()) throw ConfigError("'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(finite_number(v, key));
    return out;
}

std::vector<std::string> string_array(const json& j, const std::string& key) {
    if (!j.is_array()) throw ConfigError("'" + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string()) throw ConfigError("'" + key + "' must contain only strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

Command parse_command(const std::string& name) {
    if (name == "mask-signal") return Command::MaskSignal;
    if (name == "mask-microfile") return Command::MaskMicrofile;
    if (name == "wrm") return Command::Wrm;
    if (name == "verify") return Command::Verify;
    throw ConfigError("unknown command '" + name + "'");
}

OptimizeObjective parse_objective(const json& j) {
    if (!j.is_object()) throw ConfigError("'objective' must be an object");
    OptimizeObjective obj;
    const std::string sense = j.value("sense", "maximize");
    if (sense == "maximize") {
        obj.sense = Sense::Maximize;
    } else if (sense == "minimize") {
        obj.sense = Sense::Minimize;
    } else {
        throw ConfigError("objective sense must be maximize or minimize");
    }
    obj.weights = number_array(j.at("weights"), "objective.weights");
    if (j.contains("coeff_bounds")) {
        for (const auto& b : j.at("coeff_bounds")) {
            const auto pair = number_array(b, "objective.coeff_bounds");
            if (pair.size() != 2) throw ConfigError("each coefficient bound is [lower, upper]");
            obj.coeff_bounds.push_back({pair[0], pair[1]});
        }
    }
    return obj;
}

}  // namespace

std::vector<GoalSpec::Entry> parse_goals(const json& j) {
    const json& list = j.is_object() && j.contains("goals") ? j.at("goals") : j;
    if (!list.is_array()) throw ConfigError("goals must be a JSON list of {index, goal, min?, max?}");
    std::vector<GoalSpec::Entry> entries;
    for (const auto& g : list) {
        if (!g.is_object() || !g.contains("index") || !g.contains("goal")) {
            throw ConfigError("each goal needs 'index' and 'goal'");
        }
        if (!g.at("index").is_number_integer() || g.at("index").get<long long>() < 1) {
            throw ConfigError("goal index must be a positive integer (1-based)");
        }
        Goal goal;
        goal.kind = parse_goal_kind(g.at("goal").get<std::string>());
        if (g.contains("threshold")) goal.threshold = finite_number(g.at("threshold"), "threshold");
        if (g.contains("min")) goal.min = finite_number(g.at("min"), "min");
        if (g.contains("max")) goal.max = finite_number(g.at("max"), "max");
        entries.push_back({g.at("index").get<std::size_t>(), goal});
    }
    return entries;
}

std::vector<GoalSpec::Entry> load_goals_file(const std::string& path) {
    return parse_goals(read_json_file(path, "goal file"));
}

SelectionSpec parse_selection(const json& j) {
    if (!j.is_object()) throw ConfigError("selection must be a JSON object");
    SelectionSpec spec;
    if (j.contains("vital") && j.at("vital").is_object()) {
        for (const auto& [name, value] : j.at("vital").items()) {
            spec.vital_attributes.push_back(name);
            spec.vital_combination.push_back(value.get<std::string>());
        }
    } else {
        spec.vital_attributes = string_array(j.at("vital_attributes"), "vital_attributes");
        spec.vital_combination = string_array(j.at("vital_combination"), "vital_combination");
    }
    spec.parameter_attribute = j.at("parameter_attribute").get<std::string>();
    spec.parameter_values = string_array(j.at("parameter_values"), "parameter_values");
    spec.validate();
    return spec;
}

SelectionSpec load_selection_file(const std::string& path) {
    try {
        return parse_selection(read_json_file(path, "selection file"));
    } catch (const json::exception& e) {
        throw ConfigError("selection file '" + path + "': " + e.what());
    }
}

OffsetPolicy parse_offset(const std::string& text) {
    if (text == "auto") return OffsetPolicy::automatic();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !(v >= 0.0) || !std::isfinite(v)) {
        throw ConfigError("offset must be 'auto' or a non-negative number, got '" + text + "'");
    }
    return OffsetPolicy::fixed(v);
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find(',', pos);
        if (end == std::string::npos) end = text.size();
        std::string item = text.substr(pos, end - pos);
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        item = b == std::string::npos ? "" : item.substr(b, e - b + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size() || !std::isfinite(v)) {
            throw ConfigError("bad number '" + item + "' in list '" + text + "'");
        }
        out.push_back(v);
        pos = end + 1;
    }
    return out;
}

void apply_config_json(const json& j, RunConfig& cfg) {
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    try {
        if (j.contains("command")) cfg.command = parse_command(j.at("command").get<std::string>());
        auto set_string = [&](const char* key, std::string& dst) {
            if (j.contains(key)) dst = j.at(key).get<std::string>();
        };
        set_string("input", cfg.input);
        set_string("output", cfg.output);
        set_string("scaled_output", cfg.scaled_output);
        set_string("report", cfg.report);
        set_string("dump_lp", cfg.dump_lp);
        set_string("original", cfg.original);
        set_string("masked", cfg.masked);
        set_string("wavelet", cfg.wavelet);
        if (j.contains("detail_tolerance")) cfg.detail_tolerance = finite_number(j.at("detail_tolerance"), "detail_tolerance");
        if (j.contains("length")) cfg.length = j.at("length").get<std::size_t>();
        if (j.contains("level")) cfg.level = j.at("level").get<int>();
        if (j.contains("goals")) {
            cfg.goal_entries = j.at("goals").is_string() ? load_goals_file(j.at("goals").get<std::string>())
                                                         : parse_goals(j.at("goals"));
            cfg.goals_given = true;
        }
        if (j.contains("offset")) {
            const auto& o = j.at("offset");
            cfg.offset = o.is_string() ? parse_offset(o.get<std::string>()) : parse_offset(std::to_string(o.get<double>()));
            cfg.offset_given = true;
        }
        if (j.contains("sum_repair")) {
            cfg.sum_repair = j.at("sum_repair").get<bool>();
            cfg.repair_given = true;
        }
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("override_coeffs")) cfg.override_coeffs = number_array(j.at("override_coeffs"), "override_coeffs");
        if (j.contains("lp_mode")) {
            const auto mode = j.at("lp_mode").get<std::string>();
            if (mode == "feasibility") {
                cfg.lp_mode = SolveMode::Feasibility;
            } else if (mode == "optimize") {
                cfg.lp_mode = SolveMode::Optimize;
            } else {
                throw ConfigError("lp_mode must be feasibility or optimize");
            }
        }
        if (j.contains("objective")) cfg.objective = parse_objective(j.at("objective"));
        if (j.contains("paper_repro")) cfg.paper_repro = j.at("paper_repro").get<bool>();
        if (j.contains("selection")) {
            cfg.selection = j.at("selection").is_string() ? load_selection_file(j.at("selection").get<std::string>())
                                                          : parse_selection(j.at("selection"));
        }
        if (j.contains("delimiter")) {
            const auto d = j.at("delimiter").get<std::string>();
            if (d.size() != 1) throw ConfigError("delimiter must be a single character");
            cfg.csv.delimiter = d[0];
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

MaskingConfig RunConfig::masking_config(std::size_t signal_length) const {
    const FilterPair filters = parse_filter(wavelet);
    MaskingConfig mc;
    mc.family = filters.family;
    mc.order = filters.order;
    mc.level = level;
    if (!goals_given) throw ConfigError("masking needs a goal file (--goals)");
    mc.goals = GoalSpec::from_entries(signal_length, goal_entries);
    mc.offset = offset;
    mc.sum_repair = sum_repair;
    mc.rng_seed = seed;
    mc.override_coeffs = override_coeffs;
    mc.lp_mode = lp_mode;
    mc.objective = objective;
    if (paper_repro) {
        if (!offset_given) mc.offset = OffsetPolicy::fixed(2500.0);
        if (!repair_given) mc.sum_repair = false;
    }
    if (mc.objective && mc.objective->coeff_bounds.empty() && mc.lp_mode == SolveMode::Optimize) {
        throw ConfigError("optimize mode needs objective.coeff_bounds for every coefficient");
    }
    return mc;
}

}  // namespace wavemask::cli
