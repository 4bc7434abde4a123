#include "purify/tensor.hpp"

#include "purify/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <string>

namespace purify {

namespace {

void check_label(const SubsystemShape& shape, int label) {
    if (label < 1 || label > shape.count()) {
        throw IndexOutOfRange("subsystem label " + std::to_string(label) + " outside 1.." +
                              std::to_string(shape.count()));
    }
}

std::vector<bool> membership(const SubsystemShape& shape, const SubsystemSet& labels) {
    std::vector<bool> in(static_cast<std::size_t>(shape.count()), false);
    for (int label : labels) {
        check_label(shape, label);
        in[static_cast<std::size_t>(label - 1)] = true;
    }
    return in;
}

// Splits every basis index into the part carried by `selected` subsystems and
// the remainder, both expressed as offsets into the full index.
void split_offsets(const SubsystemShape& shape, const std::vector<bool>& selected,
                   std::vector<Eigen::Index>& sel_part, std::vector<Eigen::Index>& rest_part) {
    const Eigen::Index total = shape.total_dim();
    sel_part.assign(static_cast<std::size_t>(total), 0);
    rest_part.assign(static_cast<std::size_t>(total), 0);
    for (Eigen::Index idx = 0; idx < total; ++idx) {
        Eigen::Index rem = idx;
        Eigen::Index stride = 1;
        for (int k = shape.count() - 1; k >= 0; --k) {
            const int dk = shape.dims()[static_cast<std::size_t>(k)];
            const Eigen::Index digit = rem % dk;
            rem /= dk;
            if (selected[static_cast<std::size_t>(k)]) {
                sel_part[static_cast<std::size_t>(idx)] += digit * stride;
            } else {
                rest_part[static_cast<std::size_t>(idx)] += digit * stride;
            }
            stride *= dk;
        }
    }
}

}  // namespace

SubsystemShape::SubsystemShape(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw InvalidArgument("subsystem shape needs at least one subsystem");
    }
    for (int d : dims_) {
        if (d < 2) {
            throw InvalidArgument("local dimension must be >= 2, got " + std::to_string(d));
        }
        total_ *= d;
    }
}

SubsystemShape SubsystemShape::uniform(int local_dim, int copies) {
    if (copies < 1) {
        throw InvalidArgument("number of subsystems must be >= 1");
    }
    return SubsystemShape(std::vector<int>(static_cast<std::size_t>(copies), local_dim));
}

int SubsystemShape::dim(int label) const {
    check_label(*this, label);
    return dims_[static_cast<std::size_t>(label - 1)];
}

SubsystemShape SubsystemShape::concat(const SubsystemShape& other) const {
    std::vector<int> dims = dims_;
    dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
    return SubsystemShape(std::move(dims));
}

SubsystemShape SubsystemShape::select(const SubsystemSet& labels) const {
    auto in = membership(*this, labels);
    std::vector<int> dims;
    for (std::size_t k = 0; k < in.size(); ++k) {
        if (in[k]) dims.push_back(dims_[k]);
    }
    return SubsystemShape(std::move(dims));
}

ComplexMatrix::ComplexMatrix(SubsystemShape shape, Mat entries)
    : shape_(std::move(shape)), entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() != shape_.total_dim()) {
        throw DimensionMismatch("matrix of size " + std::to_string(entries_.rows()) + "x" +
                                std::to_string(entries_.cols()) + " does not match total dimension " +
                                std::to_string(shape_.total_dim()));
    }
}

ComplexMatrix ComplexMatrix::identity(const SubsystemShape& shape) {
    return ComplexMatrix(shape, Mat::Identity(shape.total_dim(), shape.total_dim()));
}

ComplexMatrix ComplexMatrix::zero(const SubsystemShape& shape) {
    return ComplexMatrix(shape, Mat::Zero(shape.total_dim(), shape.total_dim()));
}

ComplexMatrix ComplexMatrix::outer(const SubsystemShape& shape, const Vec& v) {
    return ComplexMatrix(shape, v * v.adjoint());
}

ComplexMatrix ComplexMatrix::diagonal(const SubsystemShape& shape, const Eigen::VectorXd& diag) {
    if (diag.size() != shape.total_dim()) {
        throw DimensionMismatch("diagonal length does not match total dimension");
    }
    Mat m = Mat::Zero(shape.total_dim(), shape.total_dim());
    m.diagonal() = diag.cast<Complex>();
    return ComplexMatrix(shape, std::move(m));
}

ComplexMatrix ComplexMatrix::adjoint() const { return ComplexMatrix(shape_, entries_.adjoint()); }

ComplexMatrix ComplexMatrix::transpose() const { return ComplexMatrix(shape_, entries_.transpose()); }

ComplexMatrix ComplexMatrix::reshaped(const SubsystemShape& shape) const {
    return ComplexMatrix(shape, entries_);
}

bool ComplexMatrix::is_hermitian(double tol) const {
    const double skew = (entries_ - entries_.adjoint()).norm();
    return skew <= tol * std::max(1.0, entries_.norm());
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (!(shape_ == rhs.shape_)) throw DimensionMismatch("operand shapes differ in +");
    entries_ += rhs.entries_;
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (!(shape_ == rhs.shape_)) throw DimensionMismatch("operand shapes differ in -");
    entries_ -= rhs.entries_;
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    entries_ *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!(a.shape_ == b.shape_)) throw DimensionMismatch("operand shapes differ in *");
    return ComplexMatrix(a.shape_, a.entries_ * b.entries_);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const Mat& x = a.entries();
    const Mat& y = b.entries();
    Mat out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return ComplexMatrix(a.shape().concat(b.shape()), std::move(out));
}

ComplexMatrix kron_power(const ComplexMatrix& a, int copies) {
    if (copies < 1) throw InvalidArgument("kron_power needs copies >= 1");
    ComplexMatrix out = a;
    for (int k = 1; k < copies; ++k) out = kron(out, a);
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemSet& keep) {
    if (keep.empty()) throw InvalidArgument("partial_trace needs a nonempty keep set");
    const SubsystemShape& shape = m.shape();
    auto kept = membership(shape, keep);
    SubsystemShape out_shape = shape.select(keep);

    std::vector<Eigen::Index> kept_off, traced_off;
    split_offsets(shape, kept, kept_off, traced_off);

    // Re-index kept offsets (strides of the full index) into the compact output index.
    const Eigen::Index total = shape.total_dim();
    std::vector<Eigen::Index> out_index(static_cast<std::size_t>(total));
    std::vector<Eigen::Index> trace_index(static_cast<std::size_t>(total));
    for (Eigen::Index idx = 0; idx < total; ++idx) {
        Eigen::Index rem = idx, o = 0, t = 0, ostride = 1, tstride = 1;
        for (int k = shape.count() - 1; k >= 0; --k) {
            const int dk = shape.dims()[static_cast<std::size_t>(k)];
            const Eigen::Index digit = rem % dk;
            rem /= dk;
            if (kept[static_cast<std::size_t>(k)]) {
                o += digit * ostride;
                ostride *= dk;
            } else {
                t += digit * tstride;
                tstride *= dk;
            }
        }
        out_index[static_cast<std::size_t>(idx)] = o;
        trace_index[static_cast<std::size_t>(idx)] = t;
    }
    const Eigen::Index kept_dim = out_shape.total_dim();
    const Eigen::Index traced_dim = total / kept_dim;
    // groups[t][o] = full index
    std::vector<Eigen::Index> groups(static_cast<std::size_t>(total));
    for (Eigen::Index idx = 0; idx < total; ++idx) {
        groups[static_cast<std::size_t>(trace_index[static_cast<std::size_t>(idx)] * kept_dim +
                                        out_index[static_cast<std::size_t>(idx)])] = idx;
    }

    Mat out = Mat::Zero(kept_dim, kept_dim);
    const Mat& e = m.entries();
    for (Eigen::Index t = 0; t < traced_dim; ++t) {
        const Eigen::Index* g = &groups[static_cast<std::size_t>(t * kept_dim)];
        for (Eigen::Index c = 0; c < kept_dim; ++c) {
            for (Eigen::Index r = 0; r < kept_dim; ++r) {
                out(r, c) += e(g[r], g[c]);
            }
        }
    }
    return ComplexMatrix(std::move(out_shape), std::move(out));
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const SubsystemSet& subsystems) {
    const SubsystemShape& shape = m.shape();
    auto sel = membership(shape, subsystems);
    std::vector<Eigen::Index> s, r;
    split_offsets(shape, sel, s, r);
    const Eigen::Index n = shape.total_dim();
    const Mat& e = m.entries();
    Mat out(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const auto uj = static_cast<std::size_t>(j);
            out(r[ui] + s[uj], r[uj] + s[ui]) = e(i, j);
        }
    }
    return ComplexMatrix(shape, std::move(out));
}

HermitianSpectrum eig_hermitian(const ComplexMatrix& m) {
    if (!m.is_hermitian(1e-10)) {
        throw NotHermitian("eig_hermitian: input is not Hermitian within tolerance");
    }
    const Mat sym = 0.5 * (m.entries() + m.entries().adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error("eig_hermitian: eigendecomposition did not converge");
    }
    return HermitianSpectrum{solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const ComplexMatrix& m) {
    if (!m.is_hermitian(1e-10)) {
        throw NotHermitian("min_eigenvalue: input is not Hermitian within tolerance");
    }
    const Mat sym = 0.5 * (m.entries() + m.entries().adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error("min_eigenvalue: eigendecomposition did not converge");
    }
    return solver.eigenvalues()(0);
}

ComplexMatrix apply_local_left(const Mat& op, const ComplexMatrix& m, int label) {
    const SubsystemShape& shape = m.shape();
    check_label(shape, label);
    const int d = shape.dim(label);
    if (op.rows() != d || op.cols() != d) {
        throw DimensionMismatch("local operator does not match subsystem dimension");
    }
    Eigen::Index inner = 1;
    for (int k = label; k < shape.count(); ++k) inner *= shape.dims()[static_cast<std::size_t>(k)];
    const Eigen::Index outer = shape.total_dim() / (inner * d);

    const Mat& e = m.entries();
    Mat out = Mat::Zero(e.rows(), e.cols());
    for (Eigen::Index o = 0; o < outer; ++o) {
        for (Eigen::Index in = 0; in < inner; ++in) {
            const Eigen::Index base = o * d * inner + in;
            for (int a = 0; a < d; ++a) {
                for (int b = 0; b < d; ++b) {
                    const Complex w = op(a, b);
                    if (w == Complex(0.0)) continue;
                    out.row(base + a * inner) += w * e.row(base + b * inner);
                }
            }
        }
    }
    return ComplexMatrix(shape, std::move(out));
}

ComplexMatrix conjugate_local(const Mat& op, const ComplexMatrix& m, int label) {
    // op·m·op† = (op·(op·m)†)†
    ComplexMatrix left = apply_local_left(op, m, label);
    return apply_local_left(op, left.adjoint(), label).adjoint();
}

Complex hilbert_schmidt(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("hilbert_schmidt: dimensions differ");
    return a.entries().conjugate().cwiseProduct(b.entries()).sum();
}

}  // namespace purify
