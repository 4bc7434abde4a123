#pragma once

// Fidelity and probability SDPs over purification protocols, their dual
// certificates, and the two-copy golden-point certificate.

#include "purify/channels.hpp"
#include "purify/sdp.hpp"

#include <vector>

namespace purify {

// Variables: J on (C^d)^{⊗n} ⊗ C^d (block 0) and a slack S on (C^d)^{⊗n} (block 1).
// maximize tr[J Q^T]/p  s.t.  tr[J R^T] = p,  tr_out J + S = I.
// Transposes act on the n input systems. Needs d^{n+1} ≤ 81.
SdpProblem build_fidelity_sdp(const NoiseChannel& ch, int n, double p);

// maximize tr[J R^T]  s.t.  tr[J (Q^T − f R^T)] = 0,  tr_out J + S = I.
SdpProblem build_probability_sdp(const NoiseChannel& ch, int n, double f);

// Choi block of a fidelity or probability SDP solution.
ComplexMatrix protocol_choi(const SdpSolution& sol, int n, int d);

struct DualCertificate {
    double x;
    ComplexMatrix y_matrix;  // on (C^d)^{⊗n}
    double objective = 0.0;
};

// Dual pair {x, Y} recovered from a solved fidelity SDP.
DualCertificate fidelity_dual(const SdpSolution& sol, int n, int d, double p);

struct FeasibilityReport {
    bool feasible = false;
    double constraint_max_eig = 0.0;  // largest eigenvalue of the operator required ⪯ 0
    double y_max_eig = 0.0;           // largest eigenvalue of Y
    double objective = 0.0;
};

// Q^T + x R^T + Y ⊗ I ⪯ 0 and Y ⪯ 0; objective −x − tr[Y]/p.
// Eigenvalue tolerances scale with 1 + |x|‖R‖ + ‖Q‖ + ‖Y‖ (Frobenius).
FeasibilityReport check_fidelity_dual(const NoiseChannel& ch, int n, double p, const DualCertificate& cert,
                                      double tol = 1e-9);

// (1 − x f) R^T + x Q^T + Y ⊗ I ⪯ 0 and Y ⪯ 0; objective −tr[Y].
FeasibilityReport check_probability_dual(const NoiseChannel& ch, int n, double f, const DualCertificate& cert,
                                         double tol = 1e-9);

struct SValues {
    double s_plus = 0.0;
    double s_minus = 0.0;
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
};

struct CertificateReport {
    int d = 0;
    double delta = 0.0;
    double f2 = 0.0;
    double t2 = 0.0;
    ComplexMatrix omega;
    SValues pairing;      // Hilbert–Schmidt coefficients against the S basis
    SValues closed_form;  // analytic expressions
    double min_eig = 0.0;  // of f2 R2 − Q2^{T3}
};

// ω = (f2 R2 − Q2^{T3})/t2 for depolarizing noise and its decomposition in the
// basis built from X = P((23))^{T3} and V = P((12)). Needs d ≤ 8.
CertificateReport golden_certificate(int d, double delta);

SValues golden_closed_form(int d, double delta);

struct TradeoffPoint {
    double p = 0.0;
    double fidelity = 0.0;
    SdpStatus status = SdpStatus::MaxIterations;
    double gap = 0.0;
    bool ok = false;  // false when the solve threw or did not reach optimality
};

// One fidelity-SDP solve per grid value, run concurrently; sorted by p.
std::vector<TradeoffPoint> sweep_tradeoff(const NoiseChannel& ch, int n, std::vector<double> p_grid);

}  // namespace purify
