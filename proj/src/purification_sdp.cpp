#include "purify/purification_sdp.hpp"

#include "purify/analytic.hpp"
#include "purify/errors.hpp"
#include "purify/parallel.hpp"
#include "purify/symgroup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace purify {

namespace {

using Triplet = Eigen::Triplet<Complex>;

void check_size(int d, int n) {
    if (n < 1) throw InvalidArgument("purification SDP needs n >= 1");
    double total = 1.0;
    for (int k = 0; k <= n; ++k) total *= d;
    if (total > 81.0) {
        throw BudgetExceeded("purification SDP needs d^(n+1) <= 81, got " + std::to_string(static_cast<long>(total)));
    }
}

SubsystemSet first_labels(int n) {
    SubsystemSet s(static_cast<std::size_t>(n));
    std::iota(s.begin(), s.end(), 1);
    return s;
}

// Q^T and R^T with the transpose on the n input systems, symmetrized.
struct TransposedMoments {
    Mat qt;
    Mat rt;
};

TransposedMoments transposed_moments(const NoiseChannel& ch, int n) {
    const MomentOperators m = moment_operators(ch, n);
    const SubsystemSet in = first_labels(n);
    Mat qt = partial_transpose(m.q, in).entries();
    Mat rt = partial_transpose(m.r, in).entries();
    return {(qt + qt.adjoint()) / 2.0, (rt + rt.adjoint()) / 2.0};
}

SparseHermitian sparse_from(Eigen::Index dim, const std::vector<Triplet>& entries) {
    SparseHermitian s(dim, dim);
    s.setFromTriplets(entries.begin(), entries.end());
    return s;
}

// ⟨H_k ⊗ I, J⟩ + ⟨H_k, S⟩ = tr H_k over the orthonormal Hermitian basis
// E_aa, (E_ab + E_ba)/√2, i(E_ab − E_ba)/√2.
void append_cptn_constraints(SdpProblem& prob, int d) {
    const Eigen::Index D = prob.block_dims[1];
    const double r2 = 1.0 / std::sqrt(2.0);
    auto add = [&](const std::vector<std::pair<std::pair<Eigen::Index, Eigen::Index>, Complex>>& h, double rhs) {
        std::vector<Triplet> jt, st;
        for (const auto& [rc, v] : h) {
            st.emplace_back(rc.first, rc.second, v);
            for (int o = 0; o < d; ++o) jt.emplace_back(rc.first * d + o, rc.second * d + o, v);
        }
        prob.constraints.push_back({{0, sparse_from(D * d, jt)}, {1, sparse_from(D, st)}});
        prob.rhs.push_back(rhs);
    };
    for (Eigen::Index a = 0; a < D; ++a) add({{{a, a}, Complex(1.0)}}, 1.0);
    for (Eigen::Index a = 0; a < D; ++a) {
        for (Eigen::Index b = a + 1; b < D; ++b) {
            add({{{a, b}, Complex(r2)}, {{b, a}, Complex(r2)}}, 0.0);
            add({{{a, b}, Complex(0.0, r2)}, {{b, a}, Complex(0.0, -r2)}}, 0.0);
        }
    }
}

SdpProblem skeleton(int n, int d) {
    SdpProblem prob;
    int D = 1;
    for (int k = 0; k < n; ++k) D *= d;
    prob.block_dims = {D * d, D};
    return prob;
}

double max_eig(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

Mat y_tensor_identity(const ComplexMatrix& y, int d) {
    return kron(y, ComplexMatrix::identity(SubsystemShape({d}))).entries();
}

void check_y(const ComplexMatrix& y, int n, int d) {
    if (y.shape() != SubsystemShape::uniform(d, n)) {
        throw DimensionMismatch("dual Y must act on (C^d)^{⊗n}");
    }
}

}  // namespace

SdpProblem build_fidelity_sdp(const NoiseChannel& ch, int n, double p) {
    const int d = ch.dim();
    check_size(d, n);
    if (!(p > 0.0) || p > 1.0) throw InvalidArgument("success probability must lie in (0, 1]");
    const TransposedMoments t = transposed_moments(ch, n);
    SdpProblem prob = skeleton(n, d);
    prob.cost = {{0, to_sparse(t.qt / p, 1e-15)}};
    prob.constraints.push_back({{0, to_sparse(t.rt, 1e-15)}});
    prob.rhs.push_back(p);
    append_cptn_constraints(prob, d);
    return prob;
}

SdpProblem build_probability_sdp(const NoiseChannel& ch, int n, double f) {
    const int d = ch.dim();
    check_size(d, n);
    if (!(f >= 0.0) || f > 1.0) throw InvalidArgument("target fidelity must lie in [0, 1]");
    const TransposedMoments t = transposed_moments(ch, n);
    SdpProblem prob = skeleton(n, d);
    prob.cost = {{0, to_sparse(t.rt, 1e-15)}};
    prob.constraints.push_back({{0, to_sparse(t.qt - f * t.rt, 1e-15)}});
    prob.rhs.push_back(0.0);
    append_cptn_constraints(prob, d);
    return prob;
}

ComplexMatrix protocol_choi(const SdpSolution& sol, int n, int d) {
    if (sol.primal.empty()) throw InvalidArgument("solution has no primal blocks");
    const SubsystemShape shape = SubsystemShape::uniform(d, n + 1);
    if (sol.primal[0].rows() != shape.total_dim()) throw DimensionMismatch("Choi block has the wrong size");
    return ComplexMatrix(shape, sol.primal[0]);
}

DualCertificate fidelity_dual(const SdpSolution& sol, int n, int d, double p) {
    const SubsystemShape shape = SubsystemShape::uniform(d, n);
    const Eigen::Index D = shape.total_dim();
    if (sol.dual.size() != 1 + D * D) throw DimensionMismatch("dual vector does not match the fidelity SDP");
    // Solver dual: u0 R^T + W ⊗ I − Q^T/p ⪰ 0, W ⪰ 0 with W = Σ u_k H_k.
    // Scaling by −p gives x = −p u0 and Y = −p W.
    Mat w = Mat::Zero(D, D);
    const double r2 = 1.0 / std::sqrt(2.0);
    Eigen::Index k = 1;
    for (Eigen::Index a = 0; a < D; ++a) w(a, a) += sol.dual(k++);
    for (Eigen::Index a = 0; a < D; ++a) {
        for (Eigen::Index b = a + 1; b < D; ++b) {
            const double re = sol.dual(k++) * r2;
            const double im = sol.dual(k++) * r2;
            w(a, b) += Complex(re, im);
            w(b, a) += Complex(re, -im);
        }
    }
    const double x = -p * sol.dual(0);
    ComplexMatrix y(shape, -p * w);
    const double objective = -x - y.trace().real() / p;
    return DualCertificate{x, std::move(y), objective};
}

FeasibilityReport check_fidelity_dual(const NoiseChannel& ch, int n, double p, const DualCertificate& cert,
                                      double tol) {
    const int d = ch.dim();
    check_size(d, n);
    check_y(cert.y_matrix, n, d);
    const TransposedMoments t = transposed_moments(ch, n);
    const Mat op = t.qt + cert.x * t.rt + y_tensor_identity(cert.y_matrix, d);
    const double scale = 1.0 + std::abs(cert.x) * t.rt.norm() + t.qt.norm() + cert.y_matrix.frobenius_norm();
    FeasibilityReport rep;
    rep.constraint_max_eig = max_eig(op);
    rep.y_max_eig = max_eig(cert.y_matrix.entries());
    rep.objective = -cert.x - cert.y_matrix.trace().real() / p;
    rep.feasible = rep.constraint_max_eig <= tol * scale && rep.y_max_eig <= tol * scale;
    return rep;
}

FeasibilityReport check_probability_dual(const NoiseChannel& ch, int n, double f, const DualCertificate& cert,
                                         double tol) {
    const int d = ch.dim();
    check_size(d, n);
    check_y(cert.y_matrix, n, d);
    const TransposedMoments t = transposed_moments(ch, n);
    const Mat op = (1.0 - cert.x * f) * t.rt + cert.x * t.qt + y_tensor_identity(cert.y_matrix, d);
    const double scale = 1.0 + std::abs(cert.x) * (t.rt.norm() + t.qt.norm()) + t.rt.norm() +
                         cert.y_matrix.frobenius_norm();
    FeasibilityReport rep;
    rep.constraint_max_eig = max_eig(op);
    rep.y_max_eig = max_eig(cert.y_matrix.entries());
    rep.objective = -cert.y_matrix.trace().real();
    rep.feasible = rep.constraint_max_eig <= tol * scale && rep.y_max_eig <= tol * scale;
    return rep;
}

SValues golden_closed_form(int d, double delta) {
    if (d < 2) throw InvalidArgument("local dimension must be at least 2");
    if (!(delta >= 0.0) || delta > 1.0) throw InvalidArgument("delta must lie in [0, 1]");
    const double dd = d;
    const double den = dd * (dd - 1.0) * (dd * (delta - 2.0) - 2.0 * delta);
    const double a = dd * (2.0 - delta) + delta;
    SValues s;
    s.s_plus = (dd * (2.0 - 2.0 * delta + delta * delta) + (2.0 - delta) * delta) / (2.0 * dd);
    s.s_minus = -(dd - 2.0) * delta * a * a / (2.0 * den);
    s.s0 = 2.0 * delta * (dd * delta - dd - delta) / den;
    s.s1 = 2.0 * delta * (dd + delta - dd * delta) / den;
    return s;
}

CertificateReport golden_certificate(int d, double delta) {
    if (d < 2 || d > 8) throw InvalidArgument("golden certificate needs 2 <= d <= 8");
    const NoiseChannel ch = depolarizing(d, delta);
    const SubsystemShape s3 = SubsystemShape::uniform(d, 3);
    const SubsystemShape loc({d});

    // R2 = N^{⊗2}(Π2)/D(2,d) ⊗ I and Q2 = (N^{⊗2} ⊗ id)(Π3)/D(3,d).
    ComplexMatrix r2 = apply_tensor_power(ch, 2, symmetric_projector(2, d));
    r2 *= Complex(1.0 / static_cast<double>(sym_dim(2, d)));
    r2 = kron(r2, ComplexMatrix::identity(loc));
    ComplexMatrix q2 = apply_on(ch, symmetric_projector(3, d), {1, 2});
    q2 *= Complex(1.0 / static_cast<double>(sym_dim(3, d)));

    const EigenSpectrum spec = EigenSpectrum::depolarizing(d, delta);
    const PurificationPoint g = golden_point(spec);

    const double t2 = g.f * d - 1.0;
    const ComplexMatrix k = g.f * r2 - partial_transpose(q2, {3});
    CertificateReport rep{d, delta, g.f, t2, k * Complex(1.0 / t2), {}, golden_closed_form(d, delta), min_eigenvalue(k)};

    const double dd = d;
    const ComplexMatrix id = ComplexMatrix::identity(s3);
    const ComplexMatrix x = partial_transpose(permutation_operator(Permutation::parse(3, "(23)"), d), {3});
    const ComplexMatrix v = permutation_operator(Permutation::parse(3, "(12)"), d);
    const ComplexMatrix sym = (id + v) * Complex(0.5);
    const ComplexMatrix asym = (id - v) * Complex(0.5);
    const ComplexMatrix vxv = v * x * v;
    const ComplexMatrix xv = x * v;
    const ComplexMatrix vx = v * x;
    const double norm = 1.0 / (dd * dd - 1.0);
    const double root = 1.0 / std::sqrt(dd * dd - 1.0);

    const ComplexMatrix s_plus = sym * (id - x * Complex(2.0 / (dd + 1.0))) * sym;
    const ComplexMatrix s_minus = asym * (id - x * Complex(2.0 / (dd - 1.0))) * asym;
    const ComplexMatrix s0 = (dd * (x + vxv) - (xv + vx)) * Complex(norm);
    const ComplexMatrix s1 = (dd * (xv + vx) - (x + vxv)) * Complex(norm);
    const ComplexMatrix s2 = (x - vxv) * Complex(root);
    const ComplexMatrix s3op = (xv - vx) * Complex(0.0, root);

    auto pair = [&](const ComplexMatrix& b) { return hilbert_schmidt(b, rep.omega).real(); };
    rep.pairing = {pair(s_plus), pair(s_minus), pair(s0), pair(s1), pair(s2), pair(s3op)};
    return rep;
}

std::vector<TradeoffPoint> sweep_tradeoff(const NoiseChannel& ch, int n, std::vector<double> p_grid) {
    check_size(ch.dim(), n);
    std::sort(p_grid.begin(), p_grid.end());
    std::vector<TradeoffPoint> out(p_grid.size());
    parallel_for(p_grid.size(), [&](std::size_t i) {
        TradeoffPoint& pt = out[i];
        pt.p = p_grid[i];
        try {
            const SdpSolution sol = solve(build_fidelity_sdp(ch, n, pt.p));
            pt.status = sol.status;
            pt.gap = sol.gap;
            pt.fidelity = sol.primal_objective;
            pt.ok = sol.status == SdpStatus::Optimal;
        } catch (const Error&) {
            pt.ok = false;
        }
    });
    return out;
}

}  // namespace purify
