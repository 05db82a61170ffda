#include "wavemask/wrm.hpp"

#include <ostream>

#include "wavemask/error.hpp"

namespace wavemask {

ReconstructionMatrix::ReconstructionMatrix(std::size_t length, int level, FilterPair filters,
                                           std::vector<double> row_major)
    : length_(length), level_(level), filters_(std::move(filters)), entries_(std::move(row_major)) {
    check_level(length_, level_);
    if (entries_.size() != rows() * cols()) throw ShapeError("reconstruction matrix entry count mismatch");
}

std::vector<double> ReconstructionMatrix::apply(std::span<const double> coeffs) const {
    if (coeffs.size() != cols()) {
        throw ShapeError("expected " + std::to_string(cols()) + " coefficients, got " + std::to_string(coeffs.size()));
    }
    std::vector<double> out(rows(), 0.0);
    for (std::size_t r = 0; r < rows(); ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < cols(); ++c) acc += (*this)(r, c) * coeffs[c];
        out[r] = acc;
    }
    return out;
}

std::vector<double> ReconstructionMatrix::apply_transpose(std::span<const double> values) const {
    if (values.size() != rows()) {
        throw ShapeError("expected " + std::to_string(rows()) + " values, got " + std::to_string(values.size()));
    }
    std::vector<double> out(cols(), 0.0);
    for (std::size_t r = 0; r < rows(); ++r) {
        for (std::size_t c = 0; c < cols(); ++c) out[c] += (*this)(r, c) * values[r];
    }
    return out;
}

ReconstructionMatrix build_wrm(std::size_t length, int level, const FilterPair& filters) {
    check_level(length, level);
    const std::size_t cols = length >> level;
    std::vector<double> entries(length * cols, 0.0);
    std::vector<double> unit(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
        unit[c] = 1.0;
        const auto column = reconstruct_component(unit, Band::approximation(level), length, filters);
        for (std::size_t r = 0; r < length; ++r) entries[r * cols + c] = column[r];
        unit[c] = 0.0;
    }
    return ReconstructionMatrix(length, level, filters, std::move(entries));
}

void write_wrm_csv(std::ostream& out, const ReconstructionMatrix& wrm) {
    for (std::size_t r = 0; r < wrm.rows(); ++r) {
        for (std::size_t c = 0; c < wrm.cols(); ++c) {
            if (c > 0) out << ',';
            out << format_double(wrm(r, c));
        }
        out << '\n';
    }
}

}  // namespace wavemask
