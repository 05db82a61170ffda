#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "wavemask/wavelet.hpp"

namespace wavemask {

/// Dense m x (m / 2^k) operator with A_k = M_rec * a_k.
class ReconstructionMatrix {
public:
    ReconstructionMatrix(std::size_t length, int level, FilterPair filters, std::vector<double> row_major);

    [[nodiscard]] std::size_t rows() const noexcept { return length_; }
    [[nodiscard]] std::size_t cols() const noexcept { return length_ >> level_; }
    [[nodiscard]] int level() const noexcept { return level_; }
    [[nodiscard]] const FilterPair& filters() const noexcept { return filters_; }

    [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols() + c]; }
    [[nodiscard]] std::span<const double> row(std::size_t r) const {
        return std::span<const double>(entries_).subspan(r * cols(), cols());
    }

    /// M_rec * coeffs
    [[nodiscard]] std::vector<double> apply(std::span<const double> coeffs) const;
    /// M_rec^T * values
    [[nodiscard]] std::vector<double> apply_transpose(std::span<const double> values) const;

private:
    std::size_t length_;
    int level_;
    FilterPair filters_;
    std::vector<double> entries_;
};

/// Column j is the level-k approximation synthesized from the unit vector e_j.
ReconstructionMatrix build_wrm(std::size_t length, int level, const FilterPair& filters);

/// Row-major CSV, full round-trip precision, '.' decimal separator.
void write_wrm_csv(std::ostream& out, const ReconstructionMatrix& wrm);

}  // namespace wavemask
