#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace wavemask {

/// An ordered vector of finite real quantities indexed by parameter value.
/// Always holds at least two samples.
class Signal {
public:
    Signal() = delete;
    explicit Signal(std::vector<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<double>& vector() const noexcept { return values_; }

    [[nodiscard]] double sum() const noexcept;
    [[nodiscard]] double min() const noexcept;
    [[nodiscard]] double max_abs() const noexcept;

    friend bool operator==(const Signal&, const Signal&) = default;

private:
    std::vector<double> values_;
};

/// Parses the signal text format: one decimal number per line, blank lines and
/// lines starting with '#' skipped.
Signal read_signal(std::istream& in);
Signal read_signal_file(const std::string& path);

/// Writes one value per line using the shortest round-trip representation.
void write_signal(std::ostream& out, std::span<const double> values);
void write_signal_file(const std::string& path, std::span<const double> values);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace wavemask
