#include "wavemask/microdata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include "wavemask/error.hpp"

namespace wavemask {

MicrofileTable::MicrofileTable(std::vector<std::string> attributes, std::vector<std::vector<std::string>> records)
    : attributes_(std::move(attributes)), records_(std::move(records)) {
    if (attributes_.empty()) throw DataError("microfile needs at least one attribute");
    std::set<std::string> names;
    for (const auto& a : attributes_) {
        if (!names.insert(a).second) throw DataError("duplicate attribute name '" + a + "'");
    }
    for (std::size_t r = 0; r < records_.size(); ++r) {
        if (records_[r].size() != attributes_.size()) {
            throw DataError("record " + std::to_string(r + 1) + " has " + std::to_string(records_[r].size()) +
                            " cells, expected " + std::to_string(attributes_.size()));
        }
    }
}

std::size_t MicrofileTable::column(const std::string& name) const {
    const auto it = std::find(attributes_.begin(), attributes_.end(), name);
    if (it == attributes_.end()) throw ConfigError("unknown attribute '" + name + "'");
    return static_cast<std::size_t>(it - attributes_.begin());
}

void SelectionSpec::validate() const {
    if (vital_attributes.size() != vital_combination.size()) {
        throw ConfigError("vital combination needs one value per vital attribute");
    }
    if (std::find(vital_attributes.begin(), vital_attributes.end(), parameter_attribute) != vital_attributes.end()) {
        throw ConfigError("parameter attribute '" + parameter_attribute + "' cannot also be a vital attribute");
    }
    if (parameter_values.size() < 2) throw ConfigError("need at least 2 parameter values");
    std::set<std::string> seen;
    for (const auto& v : parameter_values) {
        if (!seen.insert(v).second) throw ConfigError("parameter value '" + v + "' listed twice");
    }
}

namespace {

// RFC 4180 style reader. Returns false at end of input.
bool read_record(std::istream& in, char delim, std::vector<std::string>& fields, std::size_t& line_no) {
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof()) return false;
    ++line_no;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (;;) {
        const int ch = in.get();
        if (ch == std::char_traits<char>::eof()) {
            if (quoted) throw DataError("line " + std::to_string(line_no) + ": unterminated quoted field");
            fields.push_back(std::move(field));
            return true;
        }
        const char c = static_cast<char>(ch);
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line_no;
                field += c;
            }
            continue;
        }
        if (c == '"' && field.empty() && !was_quoted) {
            quoted = true;
            was_quoted = true;
        } else if (c == delim) {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && in.peek() == '\n') in.get();
            fields.push_back(std::move(field));
            return true;
        } else {
            field += c;
        }
    }
}

bool needs_quotes(const std::string& cell, char delim) {
    return cell.find_first_of(std::string{delim, '"', '\n', '\r'}) != std::string::npos;
}

void write_cell(std::ostream& out, const std::string& cell, char delim, bool lone_column) {
    if (needs_quotes(cell, delim) || (lone_column && cell.empty())) {
        out << '"';
        for (char c : cell) {
            if (c == '"') out << '"';
            out << c;
        }
        out << '"';
    } else {
        out << cell;
    }
}

std::vector<std::size_t> vital_columns(const MicrofileTable& table, const SelectionSpec& spec) {
    std::vector<std::size_t> cols;
    for (const auto& name : spec.vital_attributes) cols.push_back(table.column(name));
    return cols;
}

bool matches_vital(const MicrofileTable& table, std::size_t record, const std::vector<std::size_t>& cols,
                   const SelectionSpec& spec) {
    for (std::size_t v = 0; v < cols.size(); ++v) {
        if (table.cell(record, cols[v]) != spec.vital_combination[v]) return false;
    }
    return true;
}

// Uniform draw in [0, bound) by rejection; the result depends only on the
// mt19937_64 output and is therefore identical on every platform.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        const std::uint64_t v = rng();
        if (v < limit) return v % bound;
    }
}

}  // namespace

MicrofileTable load_csv(std::istream& in, const CsvOptions& options) {
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    if (!read_record(in, options.delimiter, fields, line_no)) throw DataError("microfile is empty");

    std::vector<std::string> attributes;
    std::vector<std::vector<std::string>> records;
    if (options.has_header) {
        attributes = fields;
    } else {
        for (std::size_t i = 1; i <= fields.size(); ++i) attributes.push_back("col_" + std::to_string(i));
        records.push_back(fields);
    }
    while (true) {
        const std::size_t start_line = line_no + 1;
        if (!read_record(in, options.delimiter, fields, line_no)) break;
        if (fields.size() != attributes.size()) {
            throw DataError("line " + std::to_string(start_line) + ": " + std::to_string(fields.size()) +
                            " fields, expected " + std::to_string(attributes.size()));
        }
        records.push_back(fields);
    }
    return MicrofileTable(std::move(attributes), std::move(records));
}

MicrofileTable load_csv_file(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open microfile '" + path + "'");
    try {
        return load_csv(in, options);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_csv(const MicrofileTable& table, std::ostream& out, const CsvOptions& options) {
    const char d = options.delimiter;
    const bool lone = table.num_attributes() == 1;
    auto write_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << d;
            write_cell(out, row[i], d, lone);
        }
        out << '\n';
    };
    write_row(table.attributes());
    for (const auto& r : table.records()) write_row(r);
}

void write_csv_file(const MicrofileTable& table, const std::string& path, const CsvOptions& options) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    write_csv(table, out, options);
    out.flush();
    if (!out) throw DataError("write to '" + path + "' failed");
}

Signal extract_quantity_signal(const MicrofileTable& table, const SelectionSpec& spec) {
    spec.validate();
    const auto vital = vital_columns(table, spec);
    const std::size_t param = table.column(spec.parameter_attribute);
    std::vector<double> counts(spec.parameter_values.size(), 0.0);
    for (std::size_t r = 0; r < table.num_records(); ++r) {
        if (!matches_vital(table, r, vital, spec)) continue;
        const auto it = std::find(spec.parameter_values.begin(), spec.parameter_values.end(), table.cell(r, param));
        if (it != spec.parameter_values.end()) counts[static_cast<std::size_t>(it - spec.parameter_values.begin())] += 1.0;
    }
    return Signal(std::move(counts));
}

ModificationPlan plan_resynthesis(const MicrofileTable& table, const SelectionSpec& spec, const Signal& q,
                                  const std::vector<std::int64_t>& q_tilde, std::uint64_t seed) {
    spec.validate();
    const std::size_t m = spec.parameter_values.size();
    if (q.size() != m || q_tilde.size() != m) throw ShapeError("signal lengths do not match the parameter values");
    if (std::any_of(q_tilde.begin(), q_tilde.end(), [](std::int64_t v) { return v < 0; })) {
        throw MaskingError("masked signal has negative counts");
    }
    const auto total_q = static_cast<std::int64_t>(std::llround(q.sum()));
    const auto total_masked = std::accumulate(q_tilde.begin(), q_tilde.end(), std::int64_t{0});
    if (total_q != total_masked) {
        throw MaskingError("masked total " + std::to_string(total_masked) + " differs from original total " +
                           std::to_string(total_q));
    }
    if (extract_quantity_signal(table, spec) != q) throw DataError("signal does not match the microfile counts");

    const auto vital = vital_columns(table, spec);
    const std::size_t param = table.column(spec.parameter_attribute);

    std::vector<std::vector<std::size_t>> eligible(m);
    for (std::size_t r = 0; r < table.num_records(); ++r) {
        if (!matches_vital(table, r, vital, spec)) continue;
        const auto it = std::find(spec.parameter_values.begin(), spec.parameter_values.end(), table.cell(r, param));
        if (it != spec.parameter_values.end()) eligible[static_cast<std::size_t>(it - spec.parameter_values.begin())].push_back(r);
    }

    std::mt19937_64 rng(seed);
    std::vector<std::int64_t> surplus(m, 0);
    std::vector<std::int64_t> deficit(m, 0);
    std::vector<std::vector<std::size_t>> chosen(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto have = static_cast<std::int64_t>(std::llround(q[i]));
        if (have > q_tilde[i]) {
            surplus[i] = have - q_tilde[i];
            auto& pool = eligible[i];
            if (static_cast<std::int64_t>(pool.size()) < surplus[i]) {
                throw InternalError("area " + spec.parameter_values[i] + " has too few eligible records");
            }
            // Partial Fisher-Yates: the first `surplus` entries become a uniform sample.
            for (std::size_t k = 0; k < static_cast<std::size_t>(surplus[i]); ++k) {
                const std::size_t pick = k + static_cast<std::size_t>(bounded_draw(rng, pool.size() - k));
                std::swap(pool[k], pool[pick]);
            }
            chosen[i].assign(pool.begin(), pool.begin() + surplus[i]);
        } else if (have < q_tilde[i]) {
            deficit[i] = q_tilde[i] - have;
        }
    }

    ModificationPlan plan;
    plan.parameter_attribute = spec.parameter_attribute;
    plan.seed = seed;
    std::vector<std::size_t> consumed(m, 0);
    auto largest = [](const std::vector<std::int64_t>& v) {
        return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    };
    for (;;) {
        const std::size_t from = largest(surplus);
        const std::size_t to = largest(deficit);
        if (surplus[from] == 0 || deficit[to] == 0) break;
        const std::int64_t count = std::min(surplus[from], deficit[to]);
        for (std::int64_t k = 0; k < count; ++k) {
            plan.moves.push_back(Move{chosen[from][consumed[from]++], spec.parameter_values[from], spec.parameter_values[to]});
        }
        surplus[from] -= count;
        deficit[to] -= count;
    }
    return plan;
}

MicrofileTable apply_plan(const MicrofileTable& table, const ModificationPlan& plan) {
    MicrofileTable out = table;
    if (plan.moves.empty()) return out;
    const std::size_t param = table.column(plan.parameter_attribute);
    std::set<std::size_t> touched;
    for (const auto& mv : plan.moves) {
        if (mv.record >= table.num_records()) {
            throw DataError("stale plan: record " + std::to_string(mv.record) + " does not exist");
        }
        if (!touched.insert(mv.record).second) {
            throw DataError("stale plan: record " + std::to_string(mv.record) + " moved twice");
        }
        if (table.cell(mv.record, param) != mv.from) {
            throw DataError("stale plan: record " + std::to_string(mv.record) + " has '" + table.cell(mv.record, param) +
                            "', plan expects '" + mv.from + "'");
        }
        out.records_[mv.record][param] = mv.to;
    }
    return out;
}

}  // namespace wavemask
