// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "wavemask/error.hpp"
#include "wavemask/wavemask.hpp"

namespace {

using namespace wavemask;
namespace ts = wavemask::testing;

struct Verdict {
    bool pass = true;
    std::string detail;
};

// Collects the first few failure messages of a criterion.
class Tally {
public:
    void check(bool ok, const std::string& what) {
        ++checks_;
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) msgs_ += (msgs_.empty() ? "" : "; ") + what;
    }
    void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }

    [[nodiscard]] Verdict verdict() const {
        std::ostringstream os;
        os << checks_ << " checks";
        if (!notes_.empty()) os << ", " << notes_;
        if (failures_ > 0) os << ", " << failures_ << " failed: " << msgs_;
        return {failures_ == 0 && checks_ > 0, os.str()};
    }

private:
    std::size_t checks_ = 0;
    std::size_t failures_ = 0;
    std::string msgs_;
    std::string notes_;
};

std::string num(double v) { return format_double(v); }

FilterPair d4() { return make_filter(WaveletFamily::Daubechies, 2); }

GoalSpec census_goals() {
    GoalSpec goals(16);
    for (auto i : ts::kLowerRows) goals.set(i, Goal::lower());
    for (auto i : ts::kRaiseRows) goals.set(i, Goal::raise());
    return goals;
}

Verdict decomposition_golden() {
    Tally t;
    const Signal q(ts::kCensusSignal);
    const auto dec = decompose(q, d4(), 2);
    const auto oracle = ts::matvec(ts::dense_lowpass_chain(16, 2, d4().lowpass), ts::kCensusSignal);
    t.check(dec.approx.size() == 4, "a_2 has " + std::to_string(dec.approx.size()) + " entries");
    for (std::size_t i = 0; i < 4 && i < dec.approx.size(); ++i) {
        t.check(std::abs(dec.approx[i] - ts::kPrintedA2Coeffs[i]) <= 1e-3,
                "a_2[" + std::to_string(i + 1) + "]=" + num(dec.approx[i]));
        t.check(std::abs(dec.approx[i] - oracle[i]) <= 1e-9, "dense operator disagrees at " + std::to_string(i + 1));
    }
    return t.verdict();
}

Verdict wrm_golden() {
    Tally t;
    const auto wrm = build_wrm(16, 2, d4());
    t.check(wrm.rows() == 16 && wrm.cols() == 4, "shape");
    double worst = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double diff = std::abs(wrm(i, j) - ts::kPrintedWrm[i][j]);
            worst = std::max(worst, diff);
            t.check(diff <= 1e-3, "M_rec(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")=" + num(wrm(i, j)));
        }
    }
    t.note("max deviation " + num(worst));
    return t.verdict();
}

Verdict approximation_golden() {
    Tally t;
    const auto dec = decompose(Signal(ts::kCensusSignal), d4(), 2);
    const auto approx = build_wrm(16, 2, d4()).apply(dec.approx);
    double worst = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        const double diff = std::abs(approx[i] - ts::kPrintedApproximation[i]);
        worst = std::max(worst, diff);
        t.check(diff <= 2e-3, "A_2(" + std::to_string(i + 1) + ")=" + num(approx[i]));
    }
    t.note("max deviation " + num(worst));
    return t.verdict();
}

Verdict constraint_system() {
    Tally t;
    const auto dec = decompose(Signal(ts::kCensusSignal), d4(), 2);
    const auto wrm = build_wrm(16, 2, d4());
    const auto lp = build_constraints(wrm, wrm.apply(dec.approx), census_goals());
    t.check(lp.rows.size() == 12, std::to_string(lp.rows.size()) + " rows");
    for (std::size_t r = 0; r < 12 && r < lp.rows.size(); ++r) {
        const auto& printed = ts::kPrintedConstraints[r];
        const auto& row = lp.rows[r];
        const std::string tag = "row " + std::to_string(r + 1);
        t.check(row.relation == (printed.less_equal ? Relation::LessEqual : Relation::GreaterEqual), tag + " relation");
        t.check(std::abs(row.rhs - printed.rhs) <= 1e-3, tag + " rhs " + num(row.rhs));
        for (std::size_t c = 0; c < 4; ++c) {
            t.check(std::abs(row.coeffs[c] - printed.coeffs[c]) <= 1e-3, tag + " coefficient " + std::to_string(c + 1));
        }
        t.check(row_violation(row, ts::kPrintedNewCoeffs) <= 1.0, tag + " violated by printed solution");
    }
    t.note("printed solution max violation " + num(max_violation(lp, ts::kPrintedNewCoeffs)));
    return t.verdict();
}

Verdict end_to_end() {
    Tally t;
    MaskingConfig cfg;
    cfg.order = 2;
    cfg.level = 2;
    cfg.goals = census_goals();
    cfg.offset = OffsetPolicy::fixed(ts::kPrintedOffset);
    cfg.override_coeffs = ts::kPrintedNewCoeffs;
    cfg.sum_repair = false;
    const auto r = mask_signal(Signal(ts::kCensusSignal), cfg);
    for (std::size_t i = 0; i < 16; ++i) {
        t.check(std::abs(r.assembled.q_hat[i] - ts::kPrintedQHat[i]) <= 5e-3,
                "q_hat(" + std::to_string(i + 1) + ")=" + num(r.assembled.q_hat[i]));
    }
    const double c = r.assembled.scale;
    t.check(c >= 0.0539 && c <= 0.0549, "c=" + num(c));
    int exact = 0;
    for (std::size_t i = 0; i < 16; ++i) {
        const long long diff = r.q_tilde[i] - ts::kPrintedMaskedCounts[i];
        t.check(std::llabs(diff) <= 1, "q_tilde(" + std::to_string(i + 1) + ")=" + std::to_string(r.q_tilde[i]));
        exact += diff == 0 ? 1 : 0;
    }
    t.check(exact >= 15, std::to_string(exact) + "/16 exact");
    t.note("c=" + num(c) + ", " + std::to_string(exact) + "/16 exact, total " +
           std::to_string(std::accumulate(r.q_tilde.begin(), r.q_tilde.end(), std::int64_t{0})));
    return t.verdict();
}

double energy(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

Verdict property_suite() {
    Tally t;
    std::mt19937_64 rng(2024);
    std::size_t cases = 0;

    // Transform properties.
    for (const int order : {1, 2}) {
        const auto f = make_filter(WaveletFamily::Daubechies, order);
        for (const std::size_t m : {8u, 16u, 32u, 64u, 256u}) {
            for (int level = 1; level <= 3; ++level) {
                for (int rep = 0; rep < 4; ++rep) {
                    const auto x = ts::random_vector(rng, m, -1000.0, 1000.0);
                    const Signal s(x);
                    const auto dec = decompose(s, f, level);
                    const auto back = reconstruct_signal(dec);
                    const double scale = ts::max_abs(x);
                    double err = 0.0;
                    for (std::size_t i = 0; i < m; ++i) err = std::max(err, std::abs(back[i] - x[i]));
                    const std::string tag = "db" + std::to_string(order) + " m=" + std::to_string(m) + " k=" +
                                            std::to_string(level);
                    t.check(err <= 1e-9 * scale, tag + " reconstruction error " + num(err));
                    double e = energy(dec.approx);
                    for (const auto& d : dec.details) e += energy(d);
                    const double e0 = energy(x);
                    t.check(std::abs(e - e0) <= 1e-9 * e0, tag + " energy");
                    ++cases;
                }
            }
        }
    }

    // Masking properties on random count signals with goals taken from a perturbed approximation.
    std::uniform_int_distribution<int> count(0, 100);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::size_t masked = 0;
    for (int trial = 0; trial < 240; ++trial) {
        const std::size_t m = trial % 3 == 0 ? 32 : 16;
        const int order = 1 + trial % 2;
        const int level = 1 + (trial / 2) % 3;
        std::vector<double> counts(m);
        for (auto& c : counts) c = count(rng);
        counts[static_cast<std::size_t>(trial) % m] += 1;
        const Signal q(counts);
        const auto f = make_filter(WaveletFamily::Daubechies, order);
        const auto chain = ts::dense_lowpass_chain(m, level, f.lowpass);
        const auto recon = ts::transpose(chain);
        const auto a = ts::matvec(chain, counts);
        const auto A = ts::matvec(recon, a);
        std::vector<double> target(a);
        for (auto& v : target) v += unit(rng) * (0.2 * std::abs(v) + 5.0);
        const auto A_target = ts::matvec(recon, target);

        std::vector<GoalSpec::Entry> entries;
        std::vector<double> thresholds(m, 0.0);
        std::vector<int> direction(m, 0);
        for (std::size_t i = 0; i < m; ++i) {
            if (unit(rng) < 0.0) continue;
            const bool up = A_target[i] >= A[i];
            entries.push_back({i + 1, up ? Goal::raise(A_target[i]) : Goal::lower(A_target[i])});
            thresholds[i] = A_target[i];
            direction[i] = up ? 1 : -1;
        }
        if (entries.empty()) {
            entries.push_back({1, Goal::lower(A_target[0] + 1.0)});
            thresholds[0] = A_target[0] + 1.0;
            direction[0] = -1;
        }

        MaskingConfig cfg;
        cfg.order = order;
        cfg.level = level;
        cfg.goals = GoalSpec::from_entries(m, entries);
        cfg.sum_repair = true;
        MaskingResult r = [&] {
            try {
                return mask_signal(q, cfg);
            } catch (const Error& e) {
                t.check(false, "trial " + std::to_string(trial) + ": " + e.what());
                throw;
            }
        }();
        ++masked;
        ++cases;
        const std::string tag = "trial " + std::to_string(trial);

        // Goals, evaluated through the dense reconstruction operator.
        const auto A_new = ts::matvec(recon, r.new_coeffs);
        for (std::size_t i = 0; i < m; ++i) {
            if (direction[i] > 0) t.check(A_new[i] >= thresholds[i] - 1e-7, tag + " raise goal at " + std::to_string(i + 1));
            if (direction[i] < 0) t.check(A_new[i] <= thresholds[i] + 1e-7, tag + " lower goal at " + std::to_string(i + 1));
        }

        // Totals.
        const double total = q.sum();
        const double scaled_total = std::accumulate(r.assembled.q_scaled.begin(), r.assembled.q_scaled.end(), 0.0);
        t.check(std::abs(scaled_total - total) <= 1e-9 * total, tag + " scaled total " + num(scaled_total));
        t.check(std::accumulate(r.q_tilde.begin(), r.q_tilde.end(), std::int64_t{0}) == std::llround(total),
                tag + " repaired total");
        for (auto v : r.q_tilde) t.check(v >= 0, tag + " negative count");

        // Detail proportionality: every detail band of q_scaled is c times that of q.
        const double c = r.assembled.scale;
        const auto before = decompose(q, f, level);
        const auto after = decompose(Signal(r.assembled.q_scaled), f, level);
        for (int j = 1; j <= level; ++j) {
            double ref = 0.0;
            for (double v : before.detail(j)) ref = std::max(ref, std::abs(c * v));
            double worst = 0.0;
            for (std::size_t k = 0; k < before.detail(j).size(); ++k) {
                worst = std::max(worst, std::abs(after.detail(j)[k] - c * before.detail(j)[k]));
            }
            t.check(worst <= 1e-6 * std::max(1.0, ref), tag + " detail level " + std::to_string(j));
        }
    }
    t.check(cases >= 200, std::to_string(cases) + " cases");
    t.note(std::to_string(cases) + " cases (" + std::to_string(masked) + " masking runs)");
    return t.verdict();
}

Verdict lp_oracle() {
    Tally t;
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<std::size_t> nv(1, 4);
    std::uniform_int_distribution<std::size_t> nr(0, 8);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> rel(0, 9);
    int feasible = 0;
    int infeasible = 0;
    for (int trial = 0; trial < 400; ++trial) {
        LinearProgram lp;
        std::vector<ts::OracleConstraint> rows;
        std::vector<double> lower, upper, objective;
        const std::size_t n = nv(rng);
        const std::size_t m = nr(rng);
        lp.num_vars = n;
        for (std::size_t j = 0; j < n; ++j) {
            const double lo = coef(rng) * 5.0;
            const double hi = lo + 0.5 + (coef(rng) + 1.0) * 5.0;
            lower.push_back(lo);
            upper.push_back(hi);
            lp.bounds.push_back({lo, hi});
            objective.push_back(coef(rng));
        }
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> a(n);
            for (auto& v : a) v = coef(rng);
            const double b = coef(rng) * 4.0;
            const int k = rel(rng);
            const Relation r = k < 5 ? Relation::LessEqual : (k < 9 ? Relation::GreaterEqual : Relation::Equal);
            lp.rows.push_back({a, r, b, {}});
            rows.push_back({a, r == Relation::LessEqual ? -1 : (r == Relation::Equal ? 0 : 1), b});
        }
        lp.objective = Objective{objective, Sense::Maximize};
        const std::string tag = "trial " + std::to_string(trial);
        LpSolution sol;
        try {
            sol = solve(lp, SolveMode::Optimize);
        } catch (const Error& e) {
            t.check(false, tag + " did not terminate: " + e.what());
            continue;
        }
        const auto oracle = ts::enumerate_vertices(rows, lower, upper, objective);
        if (oracle.feasible) {
            ++feasible;
            t.check(sol.status == LpStatus::Optimal, tag + " status " + to_string(sol.status));
            if (sol.objective_value) {
                t.check(std::abs(*sol.objective_value - oracle.best) <= 1e-6,
                        tag + " optimum " + num(*sol.objective_value) + " vs " + num(oracle.best));
            }
        } else {
            ++infeasible;
            t.check(sol.status == LpStatus::Infeasible, tag + " expected infeasible");
        }
    }
    t.check(feasible >= 100, std::to_string(feasible) + " feasible programs");
    t.note(std::to_string(feasible) + " optimal, " + std::to_string(infeasible) + " infeasible");
    return t.verdict();
}

Verdict microdata_round_trip() {
    Tally t;
    std::mt19937_64 rng(8);
    const std::vector<std::string> areas = {"0101", "0102", "0201", "0202", "0301", "0302", "0401", "0402"};
    const SelectionSpec spec{{"status", "sex"}, {"1", "F"}, "area", areas};
    std::size_t total_moves = 0;
    for (int trial = 0; trial < 150; ++trial) {
        std::uniform_int_distribution<std::size_t> nrec(0, 200);
        std::uniform_int_distribution<std::size_t> area(0, areas.size());
        std::uniform_int_distribution<int> status(0, 2);
        std::uniform_int_distribution<int> coin(0, 1);
        std::vector<std::vector<std::string>> recs;
        const std::size_t n = nrec(rng);
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = area(rng);
            recs.push_back({"r" + std::to_string(i), std::to_string(status(rng)), coin(rng) ? "F" : "M",
                            a == areas.size() ? "9999" : areas[a], "\"note, " + std::to_string(i % 7) + "\""});
        }
        const MicrofileTable table({"id", "status", "sex", "area", "note"}, recs);
        const auto q = extract_quantity_signal(table, spec);
        std::vector<std::int64_t> q_tilde(areas.size(), 0);
        std::uniform_int_distribution<std::size_t> bucket(0, areas.size() - 1);
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(q.sum()); ++k) ++q_tilde[bucket(rng)];

        const std::string tag = "trial " + std::to_string(trial);
        const std::uint64_t seed = 500 + static_cast<std::uint64_t>(trial);
        const auto plan = plan_resynthesis(table, spec, q, q_tilde, seed);
        t.check(plan == plan_resynthesis(table, spec, q, q_tilde, seed), tag + " plan not deterministic");
        total_moves += plan.moves.size();
        const auto out = apply_plan(table, plan);
        t.check(out.num_records() == table.num_records(), tag + " record count");
        const auto recount = extract_quantity_signal(out, spec);
        for (std::size_t i = 0; i < areas.size(); ++i) {
            t.check(recount[i] == static_cast<double>(q_tilde[i]), tag + " recount at " + std::to_string(i + 1));
        }
        const std::size_t param = table.column("area");
        for (std::size_t r = 0; r < table.num_records(); ++r) {
            for (std::size_t c = 0; c < table.num_attributes(); ++c) {
                if (c != param) t.check(out.cell(r, c) == table.cell(r, c), tag + " cell changed");
            }
        }
        std::stringstream csv;
        write_csv(out, csv);
        t.check(load_csv(csv) == out, tag + " CSV round trip");
    }
    t.note(std::to_string(total_moves) + " moves");
    return t.verdict();
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"decomposition golden values", decomposition_golden},
        {"reconstruction matrix golden values", wrm_golden},
        {"approximation golden values", approximation_golden},
        {"constraint system", constraint_system},
        {"end-to-end reproduction", end_to_end},
        {"randomized property suite", property_suite},
        {"LP oracle equivalence", lp_oracle},
        {"microdata round trip", microdata_round_trip},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, fn] : criteria) {
        ++index;
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (v.pass ? "PASS" : "FAIL") << " [" << index << "] " << name << ": " << v.detail << '\n';
        failed += v.pass ? 0 : 1;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
