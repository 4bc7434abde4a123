#include "purify/sdp.hpp"

#include "purify/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace purify {

namespace {

using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

struct Entry {
    int row;
    int col;
    double value;
};

// One constraint restricted to one real block.
struct Slice {
    int constraint;
    std::vector<Entry> entries;
    RMat dense;  // filled when the slice is treated densely
    bool is_dense = false;
};

struct RealProblem {
    std::vector<int> dims;                    // real block sizes (2 × complex size)
    std::vector<std::vector<Slice>> slices;   // per block
    std::vector<RMat> cost;                   // minimization cost per block
    RVec b;
    int m = 0;
};

// Real embedding of a Hermitian sparse matrix, scaled by 1/2 so that
// <E(A)/2, E(X)> = tr(A X).
std::vector<Entry> embed(const SparseHermitian& a, int n) {
    std::vector<Entry> out;
    for (int k = 0; k < a.outerSize(); ++k) {
        for (SparseHermitian::InnerIterator it(a, k); it; ++it) {
            const int r = static_cast<int>(it.row());
            const int c = static_cast<int>(it.col());
            const double re = 0.5 * it.value().real();
            const double im = 0.5 * it.value().imag();
            if (re != 0.0) {
                out.push_back({r, c, re});
                out.push_back({r + n, c + n, re});
            }
            if (im != 0.0) {
                out.push_back({r, c + n, -im});
                out.push_back({r + n, c, im});
            }
        }
    }
    return out;
}

void check_term(const BlockTerm& t, const std::vector<int>& dims) {
    if (t.block < 0 || t.block >= static_cast<int>(dims.size())) {
        throw InvalidArgument("block index out of range in SDP data");
    }
    const int n = dims[static_cast<std::size_t>(t.block)];
    if (t.matrix.rows() != n || t.matrix.cols() != n) {
        throw DimensionMismatch("SDP matrix does not conform to its block dimension");
    }
    const SparseHermitian diff = SparseHermitian(t.matrix.adjoint()) - t.matrix;
    const double scale = std::max(1.0, t.matrix.norm());
    if (diff.norm() > 1e-10 * scale) throw NotHermitian("SDP data matrix is not Hermitian");
}

RealProblem to_real(const SdpProblem& p) {
    if (p.block_dims.empty()) throw InvalidArgument("SDP needs at least one block");
    for (int n : p.block_dims) {
        if (n < 1 || n > 128) throw InvalidArgument("SDP block dimensions must lie in 1..128");
    }
    if (p.constraints.size() != p.rhs.size()) throw DimensionMismatch("constraint and rhs counts differ");
    if (p.constraints.empty()) throw InvalidArgument("SDP needs at least one equality constraint");

    RealProblem r;
    r.m = static_cast<int>(p.constraints.size());
    r.b = Eigen::Map<const RVec>(p.rhs.data(), r.m);
    const std::size_t nb = p.block_dims.size();
    for (int n : p.block_dims) r.dims.push_back(2 * n);
    r.slices.resize(nb);
    r.cost.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) r.cost[b] = RMat::Zero(r.dims[b], r.dims[b]);

    for (const BlockTerm& t : p.cost) {
        check_term(t, p.block_dims);
        const auto n = static_cast<std::size_t>(t.block);
        for (const Entry& e : embed(t.matrix, p.block_dims[n])) r.cost[n](e.row, e.col) -= e.value;
    }
    for (int i = 0; i < r.m; ++i) {
        for (const BlockTerm& t : p.constraints[static_cast<std::size_t>(i)]) {
            check_term(t, p.block_dims);
            const auto n = static_cast<std::size_t>(t.block);
            auto entries = embed(t.matrix, p.block_dims[n]);
            if (entries.empty()) continue;
            // Merge repeated blocks of the same constraint.
            auto& list = r.slices[n];
            if (!list.empty() && list.back().constraint == i) {
                list.back().entries.insert(list.back().entries.end(), entries.begin(), entries.end());
            } else {
                list.push_back({i, std::move(entries), {}, false});
            }
        }
    }
    for (std::size_t b = 0; b < nb; ++b) {
        const int n = r.dims[b];
        for (Slice& s : r.slices[b]) {
            if (static_cast<int>(s.entries.size()) > 2 * n) {
                s.is_dense = true;
                s.dense = RMat::Zero(n, n);
                for (const Entry& e : s.entries) s.dense(e.row, e.col) += e.value;
            }
        }
    }
    return r;
}

void check_rank(const RealProblem& r) {
    // Gram matrix of the constraint operators.
    std::vector<Eigen::Triplet<double>> trip;
    std::size_t offset = 0;
    for (std::size_t b = 0; b < r.dims.size(); ++b) {
        const auto n = static_cast<std::size_t>(r.dims[b]);
        for (const Slice& s : r.slices[b]) {
            for (const Entry& e : s.entries) {
                trip.emplace_back(s.constraint, static_cast<int>(offset + static_cast<std::size_t>(e.row) * n +
                                                                 static_cast<std::size_t>(e.col)),
                                  e.value);
            }
        }
        offset += n * n;
    }
    Eigen::SparseMatrix<double> s(r.m, static_cast<Eigen::Index>(offset));
    s.setFromTriplets(trip.begin(), trip.end());
    const RMat gram = RMat(s * s.transpose());
    Eigen::SelfAdjointEigenSolver<RMat> es(gram, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    if (!(top > 0.0) || es.eigenvalues().minCoeff() < 1e-12 * top) {
        throw SolverError("equality constraints are linearly dependent (rank-deficient)");
    }
}

double inner(const std::vector<Entry>& a, const RMat& w) {
    // tr(A W) = Σ a_rc W_cr
    double s = 0.0;
    for (const Entry& e : a) s += e.value * w(e.col, e.row);
    return s;
}

class Solver {
  public:
    Solver(const RealProblem& r, const SdpOptions& o) : r_(r), opt_(o) {}

    RVec apply_a(const std::vector<RMat>& w) const {
        RVec out = RVec::Zero(r_.m);
        for (std::size_t b = 0; b < r_.dims.size(); ++b) {
            for (const Slice& s : r_.slices[b]) out(s.constraint) += inner(s.entries, w[b]);
        }
        return out;
    }

    std::vector<RMat> apply_at(const RVec& y) const {
        std::vector<RMat> out;
        for (std::size_t b = 0; b < r_.dims.size(); ++b) {
            RMat acc = RMat::Zero(r_.dims[b], r_.dims[b]);
            for (const Slice& s : r_.slices[b]) {
                for (const Entry& e : s.entries) acc(e.row, e.col) += y(s.constraint) * e.value;
            }
            out.push_back(std::move(acc));
        }
        return out;
    }

    // M_ij = Σ_b tr(A_ib X_b A_jb Z_b⁻¹)
    RMat schur(const std::vector<RMat>& x, const std::vector<RMat>& zinv) const {
        RMat m = RMat::Zero(r_.m, r_.m);
        for (std::size_t b = 0; b < r_.dims.size(); ++b) {
            const auto& slices = r_.slices[b];
            const RMat& xb = x[b];
            const RMat& zb = zinv[b];
            for (std::size_t p = 0; p < slices.size(); ++p) {
                const Slice& si = slices[p];
                if (si.is_dense) {
                    const RMat g = zb * si.dense * xb;  // tr(A_i X A_j Z⁻¹) = tr(A_j (Z⁻¹ A_i X))
                    for (std::size_t q = 0; q < slices.size(); ++q) {
                        const Slice& sj = slices[q];
                        if (sj.is_dense && q < p) continue;
                        const double v = inner(sj.entries, g);
                        m(si.constraint, sj.constraint) += v;
                        if (sj.constraint != si.constraint) m(sj.constraint, si.constraint) += v;
                    }
                    continue;
                }
                for (std::size_t q = p; q < slices.size(); ++q) {
                    const Slice& sj = slices[q];
                    if (sj.is_dense) continue;
                    double v = 0.0;
                    for (const Entry& a : si.entries) {
                        for (const Entry& c : sj.entries) v += a.value * c.value * xb(a.col, c.row) * zb(c.col, a.row);
                    }
                    m(si.constraint, sj.constraint) += v;
                    if (sj.constraint != si.constraint) m(sj.constraint, si.constraint) += v;
                }
            }
        }
        return m;
    }

    SdpSolution run();

  private:
    const RealProblem& r_;
    SdpOptions opt_;
};

double dot(const std::vector<RMat>& a, const std::vector<RMat>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
    return s;
}

double fro(const std::vector<RMat>& a) { return std::sqrt(dot(a, a)); }

// Largest α with X + α dX ⪰ 0 (infinity if unbounded).
double max_step(const std::vector<RMat>& x, const std::vector<RMat>& dx) {
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < x.size(); ++k) {
        Eigen::LLT<RMat> llt(x[k]);
        if (llt.info() != Eigen::Success) return 0.0;
        const RMat l = llt.matrixL();
        RMat w = l.triangularView<Eigen::Lower>().solve(dx[k]);
        w = l.triangularView<Eigen::Lower>().solve(w.transpose()).transpose();
        w = 0.5 * (w + w.transpose());
        Eigen::SelfAdjointEigenSolver<RMat> es(w, Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues()(0);
        if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
    }
    return alpha;
}

std::vector<RMat> sym(std::vector<RMat> a) {
    for (RMat& m : a) m = 0.5 * (m + m.transpose()).eval();
    return a;
}

SdpSolution Solver::run() {
    const std::size_t nb = r_.dims.size();
    double big_n = 0.0;
    for (int n : r_.dims) big_n += n;

    // Initial point scaled to the data.
    double a_norm = 0.0;
    std::vector<double> row_norm(static_cast<std::size_t>(r_.m), 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
        for (const Slice& s : r_.slices[b]) {
            for (const Entry& e : s.entries) row_norm[static_cast<std::size_t>(s.constraint)] += e.value * e.value;
        }
    }
    double xi = 10.0, eta = 10.0;
    double c_norm = 0.0;
    for (const RMat& c : r_.cost) c_norm += c.squaredNorm();
    c_norm = std::sqrt(c_norm);
    for (int i = 0; i < r_.m; ++i) {
        const double ni = std::sqrt(row_norm[static_cast<std::size_t>(i)]);
        a_norm = std::max(a_norm, ni);
        xi = std::max(xi, std::sqrt(big_n) * (1.0 + std::abs(r_.b(i))) / (1.0 + ni));
    }
    eta = std::max({eta, std::sqrt(big_n), a_norm, c_norm});
    xi = std::max(xi, std::sqrt(big_n));

    std::vector<RMat> x, z;
    for (int n : r_.dims) {
        x.push_back(xi * RMat::Identity(n, n));
        z.push_back(eta * RMat::Identity(n, n));
    }
    RVec y = RVec::Zero(r_.m);
    const double b_norm = r_.b.norm();

    SdpSolution sol;
    int stalls = 0;
    int it = 0;
    for (;; ++it) {
        const RVec rp = r_.b - apply_a(x);
        std::vector<RMat> aty = apply_at(y);
        std::vector<RMat> rd(nb);
        for (std::size_t k = 0; k < nb; ++k) rd[k] = r_.cost[k] - z[k] - aty[k];

        const double pobj = dot(r_.cost, x);
        const double dobj = r_.b.dot(y);
        const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        const double pinf = rp.norm() / (1.0 + b_norm);
        const double dinf = fro(rd) / (1.0 + c_norm);
        sol.primal_objective = -pobj;
        sol.dual_objective = -dobj;
        sol.gap = gap;
        sol.primal_infeasibility = pinf;
        sol.dual_infeasibility = dinf;
        sol.iterations = it;

        if (gap <= opt_.gap_tol && pinf <= opt_.feas_tol && dinf <= opt_.feas_tol) {
            sol.status = SdpStatus::Optimal;
            break;
        }
        // Farkas-type certificates.
        if (dobj > 0.0) {
            std::vector<RMat> s(nb);
            for (std::size_t k = 0; k < nb; ++k) s[k] = aty[k] + z[k];
            if (fro(s) / dobj < 1e-9 && dobj > 1e6) {
                sol.status = SdpStatus::Infeasible;
                break;
            }
        }
        if (pobj < 0.0) {
            if (apply_a(x).norm() / -pobj < 1e-9 && -pobj > 1e6) {
                sol.status = SdpStatus::Infeasible;
                break;
            }
        }
        if (it >= opt_.max_iter || stalls >= 5) {
            sol.status = SdpStatus::MaxIterations;
            break;
        }

        const double mu = dot(x, z) / big_n;
        std::vector<RMat> zinv(nb);
        for (std::size_t k = 0; k < nb; ++k) {
            Eigen::LLT<RMat> llt(z[k]);
            if (llt.info() != Eigen::Success) throw SolverError("dual slack lost positive definiteness");
            zinv[k] = llt.solve(RMat::Identity(r_.dims[k], r_.dims[k]));
            zinv[k] = 0.5 * (zinv[k] + zinv[k].transpose()).eval();
        }
        RMat m = schur(x, zinv);
        Eigen::LLT<RMat> mfac(m);
        if (mfac.info() != Eigen::Success) {
            const double shift = 1e-14 * m.diagonal().cwiseAbs().maxCoeff();
            m.diagonal().array() += shift;
            mfac.compute(m);
            if (mfac.info() != Eigen::Success) throw SolverError("Schur complement is not positive definite");
        }

        std::vector<RMat> xrdz(nb);
        for (std::size_t k = 0; k < nb; ++k) xrdz[k] = x[k] * rd[k] * zinv[k];
        const RVec a_zinv = apply_a(zinv);
        const RVec a_xrdz = apply_a(xrdz);

        auto direction = [&](double sigma_mu, const std::vector<RMat>* corr, RVec& dy, std::vector<RMat>& dx,
                             std::vector<RMat>& dz) {
            RVec rhs = r_.b - sigma_mu * a_zinv + a_xrdz;
            if (corr) rhs += apply_a(*corr);
            dy = mfac.solve(rhs);
            const std::vector<RMat> atdy = apply_at(dy);
            dz.resize(nb);
            dx.resize(nb);
            for (std::size_t k = 0; k < nb; ++k) {
                dz[k] = rd[k] - atdy[k];
                dx[k] = sigma_mu * zinv[k] - x[k] - x[k] * dz[k] * zinv[k];
                if (corr) dx[k] -= (*corr)[k];
            }
            dx = sym(std::move(dx));
            dz = sym(std::move(dz));
        };

        RVec dy;
        std::vector<RMat> dx, dz;
        direction(0.0, nullptr, dy, dx, dz);
        const double ap_aff = std::min(1.0, max_step(x, dx));
        const double ad_aff = std::min(1.0, max_step(z, dz));
        double mu_aff = 0.0;
        for (std::size_t k = 0; k < nb; ++k) mu_aff += ((x[k] + ap_aff * dx[k]).cwiseProduct(z[k] + ad_aff * dz[k])).sum();
        mu_aff /= big_n;
        const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

        std::vector<RMat> corr(nb);
        for (std::size_t k = 0; k < nb; ++k) corr[k] = dx[k] * dz[k] * zinv[k];
        direction(sigma * mu, &corr, dy, dx, dz);

        const double tau = 0.98;
        const double ap = std::min(1.0, tau * max_step(x, dx));
        const double ad = std::min(1.0, tau * max_step(z, dz));
        stalls = (ap < 1e-8 && ad < 1e-8) ? stalls + 1 : 0;
        for (std::size_t k = 0; k < nb; ++k) {
            x[k] += ap * dx[k];
            z[k] += ad * dz[k];
        }
        y += ad * dy;
    }

    // Back to complex Hermitian blocks and the maximization sign convention.
    for (std::size_t k = 0; k < nb; ++k) {
        const int n = r_.dims[k] / 2;
        const RMat& xr = x[k];
        Mat xc(n, n);
        xc.real() = 0.5 * (xr.topLeftCorner(n, n) + xr.bottomRightCorner(n, n));
        xc.imag() = 0.5 * (xr.bottomLeftCorner(n, n) - xr.topRightCorner(n, n));
        sol.primal.push_back(std::move(xc));
        // Z_real = E(Z)/2 for the complex slack Z.
        const RMat& zr = z[k];
        Mat zc(n, n);
        zc.real() = zr.topLeftCorner(n, n) + zr.bottomRightCorner(n, n);
        zc.imag() = zr.bottomLeftCorner(n, n) - zr.topRightCorner(n, n);
        sol.dual_slack.push_back(std::move(zc));
    }
    sol.dual = -y;
    return sol;
}

}  // namespace

std::string to_string(SdpStatus status) {
    switch (status) {
        case SdpStatus::Optimal:
            return "optimal";
        case SdpStatus::Infeasible:
            return "infeasible";
        case SdpStatus::MaxIterations:
            break;
    }
    return "max_iter";
}

SparseHermitian to_sparse(const Mat& m, double tol) {
    std::vector<Eigen::Triplet<Complex>> trip;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (std::abs(m(r, c)) > tol) trip.emplace_back(static_cast<int>(r), static_cast<int>(c), m(r, c));
        }
    }
    SparseHermitian s(m.rows(), m.cols());
    s.setFromTriplets(trip.begin(), trip.end());
    return s;
}

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options) {
    const RealProblem r = to_real(problem);
    check_rank(r);
    Solver solver(r, options);
    return solver.run();
}

}  // namespace purify
