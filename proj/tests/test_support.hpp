#pragma once

// Shared fixtures for the test suites: printed worked-example values and
// oracles that do not go through the library's code paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <vector>

namespace wavemask::testing {

// ---------------------------------------------------------------------------
// Worked example: 16 statistical areas, Daubechies-2, level 2.

inline const std::vector<double> kCensusSignal = {19, 12, 153, 71, 13, 79, 7, 33, 16, 270, 812, 135, 241, 14, 60, 4337};

inline const std::vector<double> kPrintedA2Coeffs = {2272.128, 136.352, 158.422, 569.098};

inline const std::array<std::array<double, 4>, 16> kPrintedWrm = {{
    {0.637, 0, 0, -0.137},
    {0.296, 0.233, 0, -0.029},
    {0.079, 0.404, 0, 0.017},
    {-0.012, 0.512, 0, 0},
    {-0.137, 0.637, 0, 0},
    {-0.029, 0.296, 0.233, 0},
    {0.017, 0.079, 0.404, 0},
    {0, -0.012, 0.512, 0},
    {0, -0.137, 0.637, 0},
    {0, -0.029, 0.296, 0.233},
    {0, 0.017, 0.079, 0.404},
    {0, 0, -0.012, 0.512},
    {0, 0, -0.137, 0.637},
    {0.233, 0, -0.029, 0.296},
    {0.404, 0, 0.017, 0.079},
    {0.512, 0, 0, -0.012},
}};

inline const std::vector<double> kPrintedApproximation = {1369.821, 687.286, 244.677, 41.992,  -224.98, 11.373,
                                                          112.86,   79.481,  82.24,   175.643, 244.757, 289.584,
                                                          340.918,  693.698, 965.706, 1156.942};

// Printed inequality system: (signal row, relation is <= when true, coefficients, rhs).
struct PrintedConstraint {
    std::size_t signal_row;  // 1-based
    bool less_equal;
    std::array<double, 4> coeffs;
    double rhs;
};

inline const std::vector<PrintedConstraint> kPrintedConstraints = {
    {1, true, {0.637, 0, 0, -0.137}, 1369.821},
    {2, true, {0.296, 0.233, 0, -0.029}, 687.286},
    {3, true, {0.079, 0.404, 0, 0.017}, 244.677},
    {5, false, {-0.137, 0.637, 0, 0}, -224.980},
    {6, false, {-0.029, 0.296, 0.233, 0}, 11.373},
    {7, false, {0.017, 0.079, 0.404, 0}, 112.860},
    {8, false, {0, -0.012, 0.512, 0}, 79.481},
    {9, false, {0, -0.137, 0.637, 0}, 82.240},
    {10, false, {0, -0.029, 0.296, 0.233}, 175.643},
    {14, true, {0.233, 0, -0.029, 0.296}, 693.698},
    {15, true, {0.404, 0, 0.017, 0.079}, 965.706},
    {16, true, {0.512, 0, 0, -0.012}, 1156.942},
};

inline const std::vector<std::size_t> kLowerRows = {1, 2, 3, 14, 15, 16};
inline const std::vector<std::size_t> kRaiseRows = {5, 6, 7, 8, 9, 10};

inline const std::vector<double> kPrintedNewCoeffs = {0, 379.097, 31805.084, 5464.854};

inline const std::vector<double> kPrintedNewApproximation = {
    -750.103, -70.090, 244.677,  194.196,   241.583,  7530.756, 12879.498, 16287.810,
    20216.058, 10670.153, 4734.636, 2409.508, -883.021, 693.698,  965.706,   -66.997};

inline const std::vector<double> kPrintedQHat = {-2100.924, -745.376,  153.000,  223.204,  479.563,  7598.383,
                                                 12773.639, 16241.328, 20149.818, 10764.510, 5301.879, 2254.924,
                                                 -982.939,  14.000,    60.000,    3113.061};

inline const std::vector<double> kPrintedQHatHat = {399.076,   1754.624,  2653.000,  2723.204,  2979.563,  10098.383,
                                                    15273.639, 18741.328, 22649.818, 13264.510, 7801.879,  4754.924,
                                                    1517.061,  2514.000,  2560.000,  5613.061};

inline constexpr double kPrintedOffset = 2500.0;

inline const std::vector<long long> kPrintedMaskedCounts = {22,   95,  144, 148, 162, 549, 831, 1019,
                                                            1232, 722, 424, 259, 83,  137, 139, 305};

// ---------------------------------------------------------------------------
// Dense periodized analysis operator: row i holds f[j] at column (2i-1+j) mod M.

inline std::vector<std::vector<double>> dense_analysis(std::size_t m, const std::vector<double>& filter) {
    std::vector<std::vector<double>> w(m / 2, std::vector<double>(m, 0.0));
    const long long mm = static_cast<long long>(m);
    for (std::size_t i = 0; i < m / 2; ++i) {
        for (std::size_t j = 0; j < filter.size(); ++j) {
            const long long col = ((static_cast<long long>(2 * i + j) - 1) % mm + mm) % mm;
            w[i][static_cast<std::size_t>(col)] += filter[j];
        }
    }
    return w;
}

inline std::vector<double> matvec(const std::vector<std::vector<double>>& a, const std::vector<double>& x) {
    std::vector<double> y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    }
    return y;
}

inline std::vector<std::vector<double>> matmul(const std::vector<std::vector<double>>& a,
                                               const std::vector<std::vector<double>>& b) {
    std::vector<std::vector<double>> c(a.size(), std::vector<double>(b.front().size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < b.front().size(); ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline std::vector<std::vector<double>> transpose(const std::vector<std::vector<double>>& a) {
    std::vector<std::vector<double>> t(a.front().size(), std::vector<double>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

/// Level-k lowpass analysis chain as one dense (m/2^k) x m matrix.
inline std::vector<std::vector<double>> dense_lowpass_chain(std::size_t m, int level, const std::vector<double>& l) {
    auto op = dense_analysis(m, l);
    std::size_t len = m / 2;
    for (int k = 2; k <= level; ++k) {
        op = matmul(dense_analysis(len, l), op);
        len /= 2;
    }
    return op;
}

// ---------------------------------------------------------------------------
// LP vertex-enumeration oracle: box-bounded problems only.

struct OracleConstraint {
    std::vector<double> a;
    int relation;  // -1: <=, 0: =, +1: >=
    double b;
};

struct OracleResult {
    bool feasible = false;
    double best = 0.0;
    std::vector<double> x;
};

inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        if (std::abs(a[p][c]) < 1e-10) return std::nullopt;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

/// Maximizes c.x over the rows and the box by trying every n-subset of tight constraints.
inline OracleResult enumerate_vertices(const std::vector<OracleConstraint>& rows, const std::vector<double>& lower,
                                       const std::vector<double>& upper, const std::vector<double>& c,
                                       double feas_tol = 1e-7) {
    const std::size_t n = c.size();
    std::vector<OracleConstraint> all = rows;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        all.push_back({e, +1, lower[j]});
        all.push_back({e, -1, upper[j]});
    }
    OracleResult res;
    std::vector<std::size_t> pick(n);
    for (std::size_t i = 0; i < n; ++i) pick[i] = i;
    auto feasible = [&](const std::vector<double>& x) {
        for (const auto& r : all) {
            double act = 0.0;
            for (std::size_t j = 0; j < n; ++j) act += r.a[j] * x[j];
            const double tol = feas_tol * (1.0 + std::abs(r.b));
            if (r.relation <= 0 && act > r.b + tol) return false;
            if (r.relation >= 0 && act < r.b - tol) return false;
        }
        return true;
    };
    while (true) {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (auto idx : pick) {
            a.push_back(all[idx].a);
            b.push_back(all[idx].b);
        }
        if (auto x = solve_square(a, b); x && feasible(*x)) {
            double v = 0.0;
            for (std::size_t j = 0; j < n; ++j) v += c[j] * (*x)[j];
            if (!res.feasible || v > res.best) {
                res.feasible = true;
                res.best = v;
                res.x = *x;
            }
        }
        // next combination
        std::size_t i = n;
        while (i > 0 && pick[i - 1] == all.size() - n + (i - 1)) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t k = i; k < n; ++k) pick[k] = pick[k - 1] + 1;
    }
    return res;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace wavemask::testing
