#pragma once

// Dense primal-dual interior-point solver for small block-diagonal SDPs.
//
//   maximize    Σ_b tr(C_b X_b)
//   subject to  Σ_b tr(A_ib X_b) = b_i,   X_b ⪰ 0.
//
// Blocks are complex Hermitian; internally each is solved through its real
// symmetric embedding [[Re, −Im], [Im, Re]].

#include "purify/tensor.hpp"

#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace purify {

using SparseHermitian = Eigen::SparseMatrix<Complex>;

struct BlockTerm {
    int block;
    SparseHermitian matrix;
};

// A block-diagonal Hermitian operator given by its nonzero blocks.
using BlockOperator = std::vector<BlockTerm>;

struct SdpProblem {
    std::vector<int> block_dims;
    BlockOperator cost;
    std::vector<BlockOperator> constraints;
    std::vector<double> rhs;
};

enum class SdpStatus { Optimal, Infeasible, MaxIterations };

std::string to_string(SdpStatus status);

struct SdpSolution {
    SdpStatus status = SdpStatus::MaxIterations;
    std::vector<Mat> primal;      // X_b
    Eigen::VectorXd dual;         // y, dual problem: minimize bᵀy s.t. Σ y_i A_i − C ⪰ 0
    std::vector<Mat> dual_slack;  // Σ y_i A_i − C per block
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double gap = 0.0;  // |p − d| / (1 + |p| + |d|)
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    int iterations = 0;
};

struct SdpOptions {
    double gap_tol = 1e-9;
    double feas_tol = 1e-9;
    int max_iter = 150;
};

// Drops entries with magnitude ≤ tol.
SparseHermitian to_sparse(const Mat& m, double tol = 0.0);

// Throws InvalidArgument on malformed input and SolverError on linearly
// dependent constraints. Infeasibility and iteration limits are reported
// through the status.
SdpSolution solve(const SdpProblem& problem, const SdpOptions& options = {});

}  // namespace purify
