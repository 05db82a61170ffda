#include "wavemask/wavelet.hpp"

#include <cctype>
#include <cmath>
#include <complex>
#include <numeric>

#include "wavemask/error.hpp"

namespace wavemask {

namespace {

using cplx = std::complex<double>;

constexpr int kMaxDaubechiesOrder = 10;

cplx eval_poly(const std::vector<double>& ascending, cplx x) {
    cplx acc = 0.0;
    for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) acc = acc * x + *it;
    return acc;
}

cplx eval_poly_derivative(const std::vector<double>& ascending, cplx x) {
    cplx acc = 0.0;
    for (std::size_t k = ascending.size() - 1; k >= 1; --k) {
        acc = acc * x + static_cast<double>(k) * ascending[k];
    }
    return acc;
}

// Durand-Kerner simultaneous iteration followed by Newton polishing.
std::vector<cplx> polynomial_roots(const std::vector<double>& ascending) {
    const std::size_t degree = ascending.size() - 1;
    std::vector<double> monic(ascending);
    for (double& c : monic) c /= ascending.back();

    std::vector<cplx> roots(degree);
    const cplx seed(0.4, 0.9);
    for (std::size_t i = 0; i < degree; ++i) roots[i] = std::pow(seed, static_cast<double>(i));

    for (int iter = 0; iter < 500; ++iter) {
        double shift = 0.0;
        for (std::size_t i = 0; i < degree; ++i) {
            cplx denom = 1.0;
            for (std::size_t j = 0; j < degree; ++j) {
                if (j != i) denom *= roots[i] - roots[j];
            }
            const cplx delta = eval_poly(monic, roots[i]) / denom;
            roots[i] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-15) break;
    }
    for (cplx& r : roots) {
        for (int iter = 0; iter < 5; ++iter) {
            const cplx d = eval_poly_derivative(monic, r);
            if (std::abs(d) == 0.0) break;
            r -= eval_poly(monic, r) / d;
        }
    }
    return roots;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Minimum-phase spectral factor of |m0|^2 = cos^{2p}(w/2) * P(sin^2(w/2)).
std::vector<double> daubechies_by_factorization(int order) {
    std::vector<double> half_band(order);
    for (int k = 0; k < order; ++k) half_band[k] = binomial(order - 1 + k, k);

    // Polynomial in z, descending-power coefficients, starting from 1.
    std::vector<cplx> poly{1.0};
    auto multiply_linear = [&poly](cplx root) {
        std::vector<cplx> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= poly[i] * root;
        }
        poly = std::move(next);
    };

    for (int i = 0; i < order; ++i) multiply_linear(-1.0);
    for (const cplx y : polynomial_roots(half_band)) {
        // sin^2(w/2) = (2 - z - 1/z) / 4  =>  z^2 - (2 - 4y) z + 1 = 0
        const cplx b = 2.0 - 4.0 * y;
        const cplx disc = std::sqrt(b * b - 4.0);
        cplx z = (b + disc) / 2.0;
        if (std::abs(z) > 1.0) z = (b - disc) / 2.0;
        multiply_linear(z);
    }

    std::vector<double> lowpass(poly.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        lowpass[i] = poly[i].real();
        sum += lowpass[i];
    }
    for (double& c : lowpass) c *= std::sqrt(2.0) / sum;
    return lowpass;
}

std::size_t wrap(long long index, std::size_t m) {
    const auto mm = static_cast<long long>(m);
    return static_cast<std::size_t>(((index % mm) + mm) % mm);
}

}  // namespace

std::string FilterPair::name() const { return "daubechies:" + std::to_string(order); }

std::vector<double> derive_highpass(std::span<const double> lowpass) {
    const std::size_t n = lowpass.size();
    std::vector<double> h(n);
    for (std::size_t j = 0; j < n; ++j) h[j] = (j % 2 == 0 ? 1.0 : -1.0) * lowpass[n - 1 - j];
    return h;
}

FilterPair make_filter(WaveletFamily family, int order) {
    if (family != WaveletFamily::Daubechies) throw ConfigError("unsupported wavelet family");
    if (order < 1 || order > kMaxDaubechiesOrder) {
        throw ConfigError("unsupported Daubechies order " + std::to_string(order) + " (supported: 1.." +
                          std::to_string(kMaxDaubechiesOrder) + ")");
    }

    FilterPair f;
    f.family = family;
    f.order = order;
    if (order == 1) {
        const double c = 1.0 / std::sqrt(2.0);
        f.lowpass = {c, c};
    } else if (order == 2) {
        const double s3 = std::sqrt(3.0);
        const double d = 4.0 * std::sqrt(2.0);
        f.lowpass = {(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d};
    } else {
        f.lowpass = daubechies_by_factorization(order);
    }
    f.highpass = derive_highpass(f.lowpass);
    validate_filter_pair(f);
    return f;
}

FilterPair parse_filter(const std::string& spec) {
    std::string lower;
    for (char c : spec) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "haar") return make_filter(WaveletFamily::Daubechies, 1);

    std::string digits;
    if (lower.rfind("daubechies:", 0) == 0) {
        digits = lower.substr(11);
    } else if (lower.rfind("db", 0) == 0) {
        digits = lower.substr(2);
    } else {
        throw ConfigError("unknown wavelet '" + spec + "' (expected daubechies:<order>)");
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 3) {
        throw ConfigError("bad wavelet order in '" + spec + "'");
    }
    return make_filter(WaveletFamily::Daubechies, std::stoi(digits));
}

void validate_filter_pair(const FilterPair& f, double tol) {
    const auto& l = f.lowpass;
    const auto& h = f.highpass;
    if (l.empty() || l.size() != h.size() || l.size() % 2 != 0) {
        throw ConfigError("filter pair must have equal, even, non-zero lengths");
    }
    const double sum_l = std::accumulate(l.begin(), l.end(), 0.0);
    const double sum_h = std::accumulate(h.begin(), h.end(), 0.0);
    const double norm_l = std::inner_product(l.begin(), l.end(), l.begin(), 0.0);
    const double norm_h = std::inner_product(h.begin(), h.end(), h.begin(), 0.0);
    const double cross = std::inner_product(l.begin(), l.end(), h.begin(), 0.0);
    if (std::abs(sum_l - std::sqrt(2.0)) > tol || std::abs(sum_h) > tol || std::abs(norm_l - 1.0) > tol ||
        std::abs(norm_h - 1.0) > tol || std::abs(cross) > tol) {
        throw ConfigError("filter pair " + f.name() + " violates orthonormality");
    }
}

void check_level(std::size_t length, int level) {
    if (level < 1) throw ShapeError("decomposition level must be >= 1");
    if (length < 2) throw ShapeError("signal length must be >= 2");
    if (level >= 63 || length % (std::size_t{1} << level) != 0) {
        throw ShapeError("signal length " + std::to_string(length) + " is not divisible by 2^" +
                         std::to_string(level));
    }
}

std::vector<double> analysis_step(std::span<const double> input, std::span<const double> filter) {
    const std::size_t m = input.size();
    if (m < 2 || m % 2 != 0) {
        throw ShapeError("analysis step needs an even input length >= 2, got " + std::to_string(m));
    }
    std::vector<double> out(m / 2, 0.0);
    for (std::size_t i = 0; i < m / 2; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < filter.size(); ++j) {
            acc += filter[j] * input[wrap(static_cast<long long>(2 * i + j) - 1, m)];
        }
        out[i] = acc;
    }
    return out;
}

std::vector<double> synthesis_step(std::span<const double> coeffs, std::span<const double> filter) {
    if (coeffs.empty()) throw ShapeError("synthesis step needs at least one coefficient");
    const std::size_t m = 2 * coeffs.size();
    std::vector<double> out(m, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        for (std::size_t j = 0; j < filter.size(); ++j) {
            out[wrap(static_cast<long long>(2 * i + j) - 1, m)] += filter[j] * coeffs[i];
        }
    }
    return out;
}

Decomposition decompose(const Signal& signal, const FilterPair& filters, int level) {
    check_level(signal.size(), level);
    Decomposition dec;
    dec.level = level;
    dec.length = signal.size();
    dec.filters = filters;
    std::vector<double> current = signal.vector();
    for (int j = 1; j <= level; ++j) {
        dec.details.push_back(analysis_step(current, filters.highpass));
        current = analysis_step(current, filters.lowpass);
    }
    dec.approx = std::move(current);
    return dec;
}

std::vector<double> reconstruct_component(std::span<const double> coeffs, Band band, std::size_t length,
                                          const FilterPair& filters) {
    check_level(length, band.level);
    const std::size_t expected = length >> band.level;
    if (coeffs.size() != expected) {
        throw ShapeError("band at level " + std::to_string(band.level) + " of a length-" + std::to_string(length) +
                         " signal needs " + std::to_string(expected) + " coefficients, got " +
                         std::to_string(coeffs.size()));
    }
    const auto& innermost = band.kind == Band::Kind::Detail ? filters.highpass : filters.lowpass;
    std::vector<double> current = synthesis_step(coeffs, innermost);
    for (int step = 1; step < band.level; ++step) current = synthesis_step(current, filters.lowpass);
    return current;
}

Signal reconstruct_signal(const Decomposition& dec) {
    if (static_cast<int>(dec.details.size()) != dec.level) {
        throw ShapeError("decomposition has " + std::to_string(dec.details.size()) + " detail bands for level " +
                         std::to_string(dec.level));
    }
    std::vector<double> out =
        reconstruct_component(dec.approx, Band::approximation(dec.level), dec.length, dec.filters);
    for (int j = 1; j <= dec.level; ++j) {
        const auto d = reconstruct_component(dec.detail(j), Band::detail(j), dec.length, dec.filters);
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += d[t];
    }
    return Signal(std::move(out));
}

}  // namespace wavemask
