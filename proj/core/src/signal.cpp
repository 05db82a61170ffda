#include "wavemask/signal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "wavemask/error.hpp"

namespace wavemask {

Signal::Signal(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw ShapeError("signal needs at least 2 samples, got " + std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DataError("signal sample " + std::to_string(i + 1) + " is not finite");
        }
    }
}

double Signal::sum() const noexcept { return std::accumulate(values_.begin(), values_.end(), 0.0); }

double Signal::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

double Signal::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

Signal read_signal(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        double v = 0.0;
        const char* begin = text.data();
        const char* end = text.data() + text.size();
        if (*begin == '+') ++begin;
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc{} || ptr != end) {
            throw DataError("signal line " + std::to_string(line_no) + ": not a number: '" +
                            std::string(text) + "'");
        }
        values.push_back(v);
    }
    return Signal(std::move(values));
}

Signal read_signal_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open signal file '" + path + "'");
    try {
        return read_signal(in);
    } catch (const ShapeError& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw InternalError("to_chars failed");
    return std::string(buf, ptr);
}

void write_signal(std::ostream& out, std::span<const double> values) {
    for (double v : values) out << format_double(v) << '\n';
}

void write_signal_file(const std::string& path, std::span<const double> values) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    write_signal(out, values);
    if (!out) throw DataError("write to '" + path + "' failed");
}

}  // namespace wavemask
