#pragma once

// Categorical microfile I/O, quantity-signal extraction and re-synthesis of a
// microfile whose counts match a masked signal.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wavemask/signal.hpp"

namespace wavemask {

struct ModificationPlan;

/// Records of opaque string cells. Codes keep leading zeros.
class MicrofileTable {
public:
    MicrofileTable(std::vector<std::string> attributes, std::vector<std::vector<std::string>> records);

    [[nodiscard]] const std::vector<std::string>& attributes() const noexcept { return attributes_; }
    [[nodiscard]] const std::vector<std::vector<std::string>>& records() const noexcept { return records_; }
    [[nodiscard]] std::size_t num_records() const noexcept { return records_.size(); }
    [[nodiscard]] std::size_t num_attributes() const noexcept { return attributes_.size(); }
    [[nodiscard]] const std::string& cell(std::size_t record, std::size_t attribute) const {
        return records_[record][attribute];
    }

    /// Throws ConfigError for an unknown name.
    [[nodiscard]] std::size_t column(const std::string& name) const;

    friend bool operator==(const MicrofileTable&, const MicrofileTable&) = default;

private:
    friend MicrofileTable apply_plan(const MicrofileTable&, const ModificationPlan&);

    std::vector<std::string> attributes_;
    std::vector<std::vector<std::string>> records_;
};

struct SelectionSpec {
    std::vector<std::string> vital_attributes;
    std::vector<std::string> vital_combination;
    std::string parameter_attribute;
    std::vector<std::string> parameter_values;

    void validate() const;
};

struct Move {
    std::size_t record = 0;
    std::string from;
    std::string to;

    friend bool operator==(const Move&, const Move&) = default;
};

struct ModificationPlan {
    std::string parameter_attribute;
    std::vector<Move> moves;
    std::uint64_t seed = 0;

    friend bool operator==(const ModificationPlan&, const ModificationPlan&) = default;
};

struct CsvOptions {
    char delimiter = ',';
    bool has_header = true;
};

MicrofileTable load_csv(std::istream& in, const CsvOptions& options = {});
MicrofileTable load_csv_file(const std::string& path, const CsvOptions& options = {});

/// Header plus records; cells quoted only when they contain the delimiter,
/// a quote or a line break.
void write_csv(const MicrofileTable& table, std::ostream& out, const CsvOptions& options = {});
void write_csv_file(const MicrofileTable& table, const std::string& path, const CsvOptions& options = {});

/// q_i = records matching the vital combination whose parameter equals value i.
Signal extract_quantity_signal(const MicrofileTable& table, const SelectionSpec& spec);

/// Moves randomly chosen vital-matching records out of surplus areas into
/// deficit areas (largest surplus to largest deficit, lowest index on ties).
ModificationPlan plan_resynthesis(const MicrofileTable& table, const SelectionSpec& spec, const Signal& q,
                                  const std::vector<std::int64_t>& q_tilde, std::uint64_t seed);

MicrofileTable apply_plan(const MicrofileTable& table, const ModificationPlan& plan);

}  // namespace wavemask
