#pragma once

// Periodized orthogonal wavelet analysis/synthesis (Mallat pyramid).
//
// Indexing convention (0-based), fixed for the whole library:
//
//   analysis:   out[i] = sum_j f[j] * in[(2i - 1 + j) mod M],  i = 0 .. M/2 - 1
//   synthesis:  the exact transpose of analysis.
//
// With the Daubechies-2 pair this reproduces the usual 16-sample, level-2
// reconstruction matrix including its wrap-around rows.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wavemask/signal.hpp"

namespace wavemask {

enum class WaveletFamily { Daubechies };

struct FilterPair {
    WaveletFamily family = WaveletFamily::Daubechies;
    int order = 0;
    std::vector<double> lowpass;
    std::vector<double> highpass;

    [[nodiscard]] std::size_t length() const noexcept { return lowpass.size(); }
    /// "daubechies:<order>"
    [[nodiscard]] std::string name() const;
};

/// Daubechies filter with `order` vanishing moments (length 2*order).
/// Orders 1 and 2 come from closed forms; 3..10 from spectral factorization.
FilterPair make_filter(WaveletFamily family, int order);

/// Parses "daubechies:<order>", "db<order>" or "haar".
FilterPair parse_filter(const std::string& spec);

/// h_j = (-1)^j * l_{n-1-j}
std::vector<double> derive_highpass(std::span<const double> lowpass);

/// Checks the orthonormal filter-pair identities within `tol`; throws ConfigError.
void validate_filter_pair(const FilterPair& filters, double tol = 1e-12);

/// One periodized convolve-and-downsample step. `input.size()` must be even.
std::vector<double> analysis_step(std::span<const double> input, std::span<const double> filter);

/// Adjoint of analysis_step: maps M/2 coefficients to a length-M signal.
std::vector<double> synthesis_step(std::span<const double> coeffs, std::span<const double> filter);

/// Level-k pyramid: approximation a_k and details d_1..d_k (details[j-1] = d_j).
struct Decomposition {
    int level = 0;
    std::size_t length = 0;
    std::vector<double> approx;
    std::vector<std::vector<double>> details;
    FilterPair filters;

    [[nodiscard]] const std::vector<double>& detail(int j) const { return details.at(j - 1); }
};

Decomposition decompose(const Signal& signal, const FilterPair& filters, int level);

/// Which band a coefficient vector belongs to.
struct Band {
    enum class Kind { Approximation, Detail };
    Kind kind = Kind::Approximation;
    int level = 1;

    static Band approximation(int level) { return {Kind::Approximation, level}; }
    static Band detail(int level) { return {Kind::Detail, level}; }
};

/// Synthesizes A_k (band = approximation k) or D_j (band = detail j) at length m.
std::vector<double> reconstruct_component(std::span<const double> coeffs, Band band, std::size_t length,
                                          const FilterPair& filters);

/// A_k + sum of D_j.
Signal reconstruct_signal(const Decomposition& dec);

/// Throws ShapeError unless m is divisible by 2^level with level >= 1 and m >= 2.
void check_level(std::size_t length, int level);

}  // namespace wavemask
