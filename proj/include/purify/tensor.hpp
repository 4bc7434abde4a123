#pragma once

// Dense complex linear algebra over multipartite systems.
//
// Subsystems are labelled 1..k, left to right in the Kronecker order, so a
// basis index of (C^d1 ⊗ ... ⊗ C^dk) reads as the mixed-radix number
// i1 i2 ... ik with i1 most significant.

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace purify {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// 1-based subsystem labels.
using SubsystemSet = std::vector<int>;

class SubsystemShape {
  public:
    explicit SubsystemShape(std::vector<int> dims);

    static SubsystemShape uniform(int local_dim, int copies);

    const std::vector<int>& dims() const noexcept { return dims_; }
    int count() const noexcept { return static_cast<int>(dims_.size()); }
    Eigen::Index total_dim() const noexcept { return total_; }
    // Dimension of subsystem `label` (1-based).
    int dim(int label) const;

    SubsystemShape concat(const SubsystemShape& other) const;
    // Shape of the listed subsystems, in ascending label order.
    SubsystemShape select(const SubsystemSet& labels) const;

    friend bool operator==(const SubsystemShape&, const SubsystemShape&) = default;

  private:
    std::vector<int> dims_;
    Eigen::Index total_ = 1;
};

class ComplexMatrix {
  public:
    ComplexMatrix(SubsystemShape shape, Mat entries);

    static ComplexMatrix identity(const SubsystemShape& shape);
    static ComplexMatrix zero(const SubsystemShape& shape);
    // |v><v| on the given shape (v need not be normalized).
    static ComplexMatrix outer(const SubsystemShape& shape, const Vec& v);
    static ComplexMatrix diagonal(const SubsystemShape& shape, const Eigen::VectorXd& diag);

    const SubsystemShape& shape() const noexcept { return shape_; }
    const Mat& entries() const noexcept { return entries_; }
    Eigen::Index dim() const noexcept { return entries_.rows(); }
    Complex operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

    Complex trace() const { return entries_.trace(); }
    double frobenius_norm() const { return entries_.norm(); }
    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    // Same entries reinterpreted under another shape with equal total dimension.
    ComplexMatrix reshaped(const SubsystemShape& shape) const;

    // ‖M − M†‖_F ≤ tol · max(1, ‖M‖_F)
    bool is_hermitian(double tol = 1e-10) const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    // Matrix product; operands must share a shape.
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  private:
    SubsystemShape shape_;
    Mat entries_;
};

struct HermitianSpectrum {
    Eigen::VectorXd eigenvalues;  // ascending
    Mat eigenvectors;             // columns, unitary
};

// Left operand outermost: kron(a, b)[(i,k),(j,l)] = a[i,j] b[k,l].
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_power(const ComplexMatrix& a, int copies);

// Traces out every subsystem not in `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemSet& keep);

ComplexMatrix partial_transpose(const ComplexMatrix& m, const SubsystemSet& subsystems);

HermitianSpectrum eig_hermitian(const ComplexMatrix& m);
double min_eigenvalue(const ComplexMatrix& m);

// (I ⊗ op ⊗ I) · m with op acting on subsystem `label`.
ComplexMatrix apply_local_left(const Mat& op, const ComplexMatrix& m, int label);
// op_label · m · op_label†
ComplexMatrix conjugate_local(const Mat& op, const ComplexMatrix& m, int label);

// tr(a† b)
Complex hilbert_schmidt(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace purify
