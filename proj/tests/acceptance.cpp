// Acceptance harness: one PASS/FAIL line per criterion, detail lines indented.
// Exit status is the number of failed criteria.

#include "purify/analytic.hpp"
#include "purify/channels.hpp"
#include "purify/circuit.hpp"
#include "purify/errors.hpp"
#include "purify/purification_sdp.hpp"
#include "purify/symgroup.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace purify;

namespace {

// Tolerances and budgets.
constexpr double kOracleTol = 1e-10;
constexpr double kOracleSeconds = 30.0;
constexpr double kGoldenTol = 1e-5;
constexpr double kGoldenSeconds = 60.0;
constexpr double kFlatTol = 1e-5;
constexpr double kMonotoneSlack = 1e-7;  // solver noise allowed when comparing neighbours
constexpr double kCertEigTol = 1e-10;
constexpr double kCertValueTol = 1e-10;
constexpr double kThreeCopyTol = 1e-12;
constexpr double kSwapTestTol = 1e-12;
constexpr double kLcuTol = 1e-10;
constexpr double kFourCopyTol = 1e-6;
constexpr double kPurifierTol = 1e-8;
constexpr double kTableTol = 1e-4;
constexpr double kTableSeconds = 300.0;
constexpr double kPauliGap = 1e-3;
constexpr double kDominanceSlack = 1e-7;

struct Outcome {
    bool pass;
    std::vector<std::string> details;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

template <typename... A>
std::string fmtn(const char* f, A... a) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

ComplexMatrix noisy_zero_copies(int d, double delta, int n) {
    Vec e = Vec::Zero(d);
    e(0) = 1.0;
    return kron_power(apply(depolarizing(d, delta), ComplexMatrix::outer(SubsystemShape({d}), e)), n);
}

Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    int cases = 0;
    for (int d : {2, 3, 4}) {
        for (int n = 2; n <= 5; ++n) {
            if (std::pow(d, n) > 4096) continue;
            for (double delta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                const auto spec = EigenSpectrum::depolarizing(d, delta);
                const auto rec = recursion_pn_fn(spec, n).back();
                const auto bf = brute_force_pn_fn(spec, n);
                worst = std::max({worst, std::abs(rec.p - bf.p), std::abs(rec.f - bf.f)});
                ++cases;
            }
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= kOracleTol && secs < kOracleSeconds,
            {fmtn("%d cases, max |recursion - brute force| = %.3e (tol %.0e), %.2f s (limit %.0f s)", cases, worst,
                  kOracleTol, secs, kOracleSeconds)}};
}

Outcome golden_point_sdps() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::vector<std::string> det;
    for (int d : {2, 3}) {
        for (double delta : {0.2, 0.5, 0.8}) {
            const auto ch = depolarizing(d, delta);
            const auto g = golden_point(EigenSpectrum::depolarizing(d, delta));
            const auto fs = solve(build_fidelity_sdp(ch, 2, g.p));
            const auto ps = solve(build_probability_sdp(ch, 2, g.f));
            const double ef = std::abs(fs.primal_objective - g.f), ep = std::abs(ps.primal_objective - g.p);
            const bool good = fs.status == SdpStatus::Optimal && ps.status == SdpStatus::Optimal && ef <= kGoldenTol &&
                              ep <= kGoldenTol;
            ok = ok && good;
            det.push_back(fmtn("d=%d delta=%.1f: F(p2)=%.9f vs f2=%.9f, P(f2)=%.9f vs p2=%.9f %s", d, delta,
                               fs.primal_objective, g.f, ps.primal_objective, g.p, good ? "ok" : "MISMATCH"));
        }
    }
    const double secs = seconds_since(t0);
    det.push_back(fmtn("tol %.0e, %.2f s (limit %.0f s)", kGoldenTol, secs, kGoldenSeconds));
    return {ok && secs < kGoldenSeconds, det};
}

Outcome flat_region() {
    const auto ch = depolarizing(2, 0.3);
    const auto g = golden_point(EigenSpectrum::depolarizing(2, 0.3));
    const auto pts = sweep_tradeoff(ch, 2, {0.15, 0.35, 0.55, 0.75, 0.9, 0.99});
    bool ok = true;
    std::vector<std::string> det;
    double prev = 2.0;
    for (const auto& pt : pts) {
        bool good = pt.ok;
        if (pt.p <= g.p) {
            good = good && std::abs(pt.fidelity - g.f) <= kFlatTol;
        } else {
            good = good && pt.fidelity <= prev + kMonotoneSlack;
        }
        prev = pt.fidelity;
        ok = ok && good;
        det.push_back(fmtn("p=%.2f F=%.9f (%s) %s", pt.p, pt.fidelity, pt.p <= g.p ? "flat" : "tail",
                           good ? "ok" : "VIOLATION"));
    }
    det.push_back(fmtn("p2=%.4f f2=%.9f, flat tol %.0e", g.p, g.f, kFlatTol));
    return {ok, det};
}

Outcome certificate() {
    double worst_eig = 1.0, worst_val = 0.0, worst_sum = 0.0;
    for (int d = 2; d <= 6; ++d) {
        for (int k = 1; k <= 9; ++k) {
            const auto c = golden_certificate(d, 0.1 * k);
            const auto& a = c.pairing;
            const auto& b = c.closed_form;
            worst_eig = std::min(worst_eig, c.min_eig);
            worst_val = std::max({worst_val, std::abs(a.s_plus - b.s_plus), std::abs(a.s_minus - b.s_minus),
                                  std::abs(a.s0 - b.s0), std::abs(a.s1 - b.s1), std::abs(a.s2 - b.s2),
                                  std::abs(a.s3 - b.s3)});
            worst_sum = std::max(worst_sum, std::abs(a.s_plus + a.s_minus + a.s0 - 1.0));
        }
    }
    const bool ok = worst_eig >= -kCertEigTol && worst_val <= kCertValueTol && worst_sum <= kCertValueTol;
    return {ok,
            {fmtn("45 cases: min eigenvalue %.3e (>= -%.0e), max |s - closed form| %.3e, max |s+ + s- + s0 - 1| %.3e "
                  "(tol %.0e)",
                  worst_eig, kCertEigTol, worst_val, worst_sum, kCertValueTol)}};
}

Outcome circuits() {
    std::vector<std::string> det;
    const auto three = three_copy_circuit();
    const bool c3 = three.residual_to_target <= kThreeCopyTol;
    det.push_back(fmtn("three-copy circuit residual %.3e (tol %.0e) %s", three.residual_to_target, kThreeCopyTol,
                       c3 ? "ok" : "FAIL"));

    const auto swap = lcu_purifier(2, 2);
    const Mat half = (Mat::Identity(4, 4) + permutation_operator(Permutation::parse(2, "(12)"), 2).entries()) / 2.0;
    const double es = (swap.block.entries() - half).norm();
    const bool c2 = es <= kSwapTestTol;
    det.push_back(fmtn("lcu(2,2) vs (I+SWAP)/2: %.3e (tol %.0e) %s", es, kSwapTestTol, c2 ? "ok" : "FAIL"));

    const auto lcu3 = lcu_purifier(3, 2);
    const bool cl = lcu3.residual_to_target <= kLcuTol;
    det.push_back(fmtn("lcu(3,2) vs Pi3: %.3e (tol %.0e) %s", lcu3.residual_to_target, kLcuTol, cl ? "ok" : "FAIL"));

    // Contract ansatz: six angles, five controlled permutations from [4] ∪ [2,2].
    bool c4 = false;
    try {
        const auto t = train_four_copy(7, 16);
        c4 = t.encoding.residual_to_target <= kFourCopyTol;
        det.push_back(fmtn("four-copy (5 slots) trained residual %.3e (tol %.0e) %s", t.encoding.residual_to_target,
                           kFourCopyTol, c4 ? "ok" : "FAIL"));
    } catch (const TrainingFailed& e) {
        det.push_back(fmtn("four-copy (5 slots) trained residual %.6f (tol %.0e) FAIL: the five-slot single-ancilla "
                           "ansatz does not reach Pi4",
                           e.best_residual(), kFourCopyTol));
    }
    // Supplementary, not part of the verdict.
    try {
        const auto t = train_four_copy(7, 16, extended_four_copy_sequence());
        const auto pts = recursion_pn_fn(EigenSpectrum::depolarizing(2, 0.3), 4);
        const auto po = apply_purifier(t.encoding, noisy_zero_copies(2, 0.3, 4));
        det.push_back(fmtn("info: seven-slot sequence trained residual %.3e, p=%.9f (p4=%.9f), f=%.9f (f4=%.9f)",
                           t.encoding.residual_to_target, po.success_probability, pts[3].p, po.sigma(0, 0).real(),
                           pts[3].f));
    } catch (const TrainingFailed& e) {
        det.push_back(fmt("info: seven-slot sequence best residual %.3e", e.best_residual()));
    }
    const std::vector<double> ref{1.8447 + M_PI, 3.6535, 4.3632, M_PI, 2.4319, 1.8447};
    det.push_back(fmt("info: reference angle list, best five-slot ordering residual %.6f",
                      best_four_copy_ordering(ref).residual));

    const auto p2 = apply_purifier(swap, noisy_zero_copies(2, 0.3, 2));
    const auto p3 = apply_purifier(three, noisy_zero_copies(2, 0.3, 3));
    const auto cf = three_copy_closed_form(0.3);
    const auto g = golden_point(EigenSpectrum::depolarizing(2, 0.3));
    const double e2 = std::max(std::abs(p2.success_probability - g.p), std::abs(p2.sigma(0, 0).real() - g.f));
    const double e3 = std::max({std::abs(p3.success_probability - 0.745), std::abs(p3.success_probability - cf.p),
                                std::abs(p3.sigma(0, 0).real() - cf.f)});
    const bool cp = e2 <= kPurifierTol && e3 <= kPurifierTol && std::abs(cf.f - 0.929866) < 5e-7;
    det.push_back(fmtn("apply_purifier n=3: p=%.9f f=%.9f; n=2: p=%.9f f=%.9f; max err %.3e (tol %.0e) %s",
                       p3.success_probability, p3.sigma(0, 0).real(), p2.success_probability, p2.sigma(0, 0).real(),
                       std::max(e2, e3), kPurifierTol, cp ? "ok" : "FAIL"));
    return {c3 && c2 && cl && c4 && cp, det};
}

Outcome table_cells() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::vector<std::string> det;
    for (auto [n, d] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
        const auto pt = recursion_pn_fn(EigenSpectrum::depolarizing(d, 0.3), n).back();
        const auto s = solve(build_fidelity_sdp(depolarizing(d, 0.3), n, pt.p));
        const bool good = s.status == SdpStatus::Optimal && std::abs(s.primal_objective - pt.f) <= kTableTol;
        ok = ok && good;
        det.push_back(fmtn("(n=%d, d=%d, delta=0.3): SDP %.9f vs f_n %.9f %s", n, d, s.primal_objective, pt.f,
                           good ? "ok" : "MISMATCH"));
    }
    const double secs = seconds_since(t0);
    det.push_back(fmtn("tol %.0e, %.2f s (limit %.0f s)", kTableTol, secs, kTableSeconds));
    return {ok && secs < kTableSeconds, det};
}

Outcome noise_comparison() {
    bool ok = true;
    std::vector<std::string> det;
    for (double delta : {0.2, 0.4, 0.6}) {
        const auto ch = amplitude_damping(delta);
        const auto sym = evaluate_protocol(ch, 2);
        const auto s = solve(build_fidelity_sdp(ch, 2, sym.p));
        const bool good = s.status == SdpStatus::Optimal && s.primal_objective >= sym.f - kDominanceSlack;
        ok = ok && good;
        det.push_back(fmtn("amplitude damping delta=%.1f: SDP %.9f >= symmetric %.9f at p=%.6f %s", delta,
                           s.primal_objective, sym.f, sym.p, good ? "ok" : "FAIL"));
    }
    const auto ch = pauli_preset(0.3);
    const auto sym = evaluate_protocol(ch, 2);
    const auto s = solve(build_fidelity_sdp(ch, 2, sym.p));
    const double gap = s.primal_objective - sym.f;
    const bool good = s.status == SdpStatus::Optimal && gap >= -kDominanceSlack && gap <= kPauliGap;
    ok = ok && good;
    det.push_back(fmtn("pauli preset delta=0.3: gap %.3e (<= %.0e) %s", gap, kPauliGap, good ? "ok" : "FAIL"));
    return {ok, det};
}

Outcome recursion_trend() {
    const auto ch = depolarizing(3, 0.3);
    bool ok = true;
    std::vector<std::string> det;
    std::vector<std::vector<double>> fid;
    for (int n : {2, 3, 4}) {
        const auto t = recursive_protocol(ch, n, 4);
        bool mono = true;
        for (std::size_t m = 1; m < t.fidelities.size(); ++m) mono = mono && t.fidelities[m] >= t.fidelities[m - 1];
        ok = ok && mono;
        std::string line = fmtn("n=%d:", n);
        for (double f : t.fidelities) line += fmt(" %.9f", f);
        det.push_back(line + (mono ? " non-decreasing" : " NOT MONOTONE"));
        fid.push_back(t.fidelities);
    }
    bool dominates = true;
    for (std::size_t m = 0; m < fid[0].size(); ++m) dominates = dominates && fid[1][m] >= fid[0][m];
    det.push_back(std::string("n=3 branch >= n=2 branch at every depth: ") + (dominates ? "yes" : "NO"));
    return {ok && dominates, det};
}

Outcome sample_table() {
    struct Ref {
        double f_goal;
        int n;
        double n_over_p;
    };
    const Ref refs[] = {{0.9285, 3, 8.0},     {0.9682, 8, 52.0},    {0.9801, 14, 327.0}, {0.9842, 18, 1010.0},
                        {0.9880, 23, 3890.0}, {0.9894, 26, 8550.0}, {0.9900, 28, 14300.0}};
    const auto spec = EigenSpectrum::depolarizing(3, 0.3);
    const auto pts = recursion_pn_fn(spec, 40);
    bool consistent = true;
    std::vector<std::string> det{"emitted from the recursion (d=3, delta=0.3); reference columns for comparison only"};
    det.push_back("f_goal   n   n/p_n        f_n          | ref n  ref n/p");
    for (const auto& r : refs) {
        const auto s = sample_complexity(0.3, 3, r.f_goal);
        const auto& pt = pts[static_cast<std::size_t>(s.n - 1)];
        // The emitted n is the first index whose recursion fidelity reaches the goal.
        consistent = consistent && pt.f >= r.f_goal && (s.n == 1 || pts[static_cast<std::size_t>(s.n - 2)].f < r.f_goal) &&
                     std::abs(s.expected_copies - s.n / pt.p) <= 1e-9 * s.expected_copies;
        det.push_back(fmtn("%.4f  %2d  %11.4f  %.9f | %2d     %.0f", r.f_goal, s.n, s.expected_copies, s.achieved_f,
                           r.n, r.n_over_p));
    }
    const auto at3 = pts[2];
    det.push_back(fmtn("discrepancy: at n=3 the recursion gives f=%.6f and n/p=%.4f, not the reference 0.9285 and 8;",
                       at3.f, 3 / at3.p));
    det.push_back(fmtn("the reference rows line up with the recursion at n+1 (n=4: f=%.6f, n/p=%.4f)", pts[3].f,
                       4 / pts[3].p));
    return {consistent, det};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"oracle equivalence: recursion vs brute force", oracle_equivalence},
        {"golden point: fidelity and probability SDPs", golden_point_sdps},
        {"flat region and monotone tail of F(2,p)", flat_region},
        {"two-copy certificate positivity and s-values", certificate},
        {"circuits: three-copy, LCU, four-copy, post-selection", circuits},
        {"desk-scale table cells: SDP optimum equals f_n", table_cells},
        {"noise comparison: amplitude damping and Pauli preset", noise_comparison},
        {"recursive protocol: depth and branching trends", recursion_trend},
        {"sample-complexity table from the recursion", sample_table},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o{false, {}};
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, {std::string("exception: ") + e.what()}};
        }
        std::printf("%s %zu %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first);
        for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
