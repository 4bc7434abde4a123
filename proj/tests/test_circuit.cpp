#include "purify/analytic.hpp"
#include "purify/channels.hpp"
#include "purify/circuit.hpp"
#include "purify/errors.hpp"
#include "purify/symgroup.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

using namespace purify;

namespace {

ComplexMatrix depolarized_zero(int d, double delta, int n) {
    const auto ch = depolarizing(d, delta);
    Vec e = Vec::Zero(d);
    e(0) = 1.0;
    return kron_power(apply(ch, ComplexMatrix::outer(SubsystemShape({d}), e)), n);
}

ComplexMatrix random_state(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> g;
    Mat a(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) a(r, c) = Complex(g(rng), g(rng));
    Mat rho = a * a.adjoint();
    return ComplexMatrix(SubsystemShape({d}), rho / rho.trace());
}

}  // namespace

TEST(Circuit, EmptyAndSingleRotation) {
    QuantumCircuit c(2, 2, 2);
    EXPECT_LT((compile_to_unitary(c).entries() - Mat::Identity(8, 8)).norm(), 1e-15);
    c.ry(M_PI);
    const Mat u = compile_to_unitary(c).entries();
    Mat expect = Mat::Zero(8, 8);
    expect.block(0, 4, 4, 4) = -Mat::Identity(4, 4);
    expect.block(4, 0, 4, 4) = Mat::Identity(4, 4);
    EXPECT_LT((u - expect).norm(), 1e-15);
}

TEST(Circuit, ControlledPermutationMatchesOperator) {
    for (int d : {2, 3}) {
        for (const auto& p : all_permutations(3)) {
            QuantumCircuit c(2, 3, d);
            c.controlled(1, p, -1);
            const Mat u = compile_to_unitary(c).entries();
            const Eigen::Index D = c.data_dim();
            EXPECT_LT((u.topLeftCorner(D, D) - Mat::Identity(D, D)).norm(), 1e-15);
            EXPECT_LT((u.bottomRightCorner(D, D) + permutation_operator(p, d).entries()).norm(), 1e-15);
        }
    }
}

TEST(Circuit, BlockMatchesCompiledUnitary) {
    QuantumCircuit c(4, 2, 3);
    c.prepare(uniform_preparation(4, 3)).controlled(2, Permutation::parse(2, "(12)")).ry(0.7, 1).ry(-0.2, 0);
    const Mat u = compile_to_unitary(c).entries();
    EXPECT_LT((u.adjoint() * u - Mat::Identity(36, 36)).norm(), 1e-12);
    EXPECT_LT((extract_block(c).entries() - u.topLeftCorner(9, 9)).norm(), 1e-14);
}

TEST(Circuit, UniformPreparation) {
    const Mat v = uniform_preparation(8, 6);
    EXPECT_LT((v * v - Mat::Identity(8, 8)).norm(), 1e-14);
    for (int k = 0; k < 8; ++k) EXPECT_NEAR(v(k, 0).real(), k < 6 ? 1.0 / std::sqrt(6.0) : 0.0, 1e-15);
}

TEST(Circuit, LcuPurifiers) {
    const auto two = lcu_purifier(2, 2);
    const Mat swap_half = (Mat::Identity(4, 4) + permutation_operator(Permutation::parse(2, "(12)"), 2).entries()) / 2.0;
    EXPECT_LT((two.block.entries() - swap_half).norm(), 1e-12);
    EXPECT_EQ(two.circuit.ancilla_dim(), 2);
    for (auto [n, d] : {std::pair{3, 2}, std::pair{3, 3}, std::pair{4, 2}}) {
        const auto be = lcu_purifier(n, d);
        EXPECT_LT(be.residual_to_target, 1e-10) << n << " " << d;
        const Mat u = compile_to_unitary(be.circuit).entries();
        EXPECT_LT((u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).norm(), 1e-10);
    }
    EXPECT_EQ(lcu_purifier(3, 2).circuit.ancilla_dim(), 8);
}

TEST(Circuit, ThreeCopyCircuit) {
    const auto be = three_copy_circuit();
    EXPECT_LT(be.residual_to_target, 1e-12);
    EXPECT_NEAR(be.block.trace().real(), 4.0, 1e-12);
    EXPECT_EQ(compile_to_unitary(be.circuit).dim(), 16);
    EXPECT_NEAR(kThreeCopyAlpha, -std::atan(std::sqrt(2.0)), 1e-16);
    EXPECT_NEAR(kThreeCopyBeta, std::acos(-1.0 / 3.0), 1e-16);
}

TEST(Circuit, ThreeCopyBranchWeights) {
    // Per product of permutations the path weights sum to 1/3 each on I, (123)
    // and (132); the identity collects two paths.
    const auto terms = branch_expansion(three_copy_circuit().circuit);
    ASSERT_EQ(terms.size(), 4u);
    std::map<std::string, double> coeff;
    for (const auto& t : terms) coeff[t.product.to_cycle_notation()] += t.weight;
    ASSERT_EQ(coeff.size(), 3u);
    EXPECT_NEAR(coeff["(1)"], 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(coeff["(123)"], 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(coeff["(132)"], 1.0 / 3.0, 1e-12);
    // Individual paths against products of Ry matrix entries.
    auto ry = [](double t, int to, int from) {
        const double c = std::cos(t / 2), s = std::sin(t / 2);
        const double m[2][2] = {{c, -s}, {s, c}};
        return m[to][from];
    };
    auto oracle = [&](int a1, int a2) {
        return ry(kThreeCopyAlpha, 0, a2) * ry(kThreeCopyBeta, a2, a1) * ry(kThreeCopyAlpha, a1, 0);
    };
    for (const auto& t : terms) {
        ASSERT_EQ(t.path.size(), 3u);
        EXPECT_NEAR(t.weight, oracle(t.path[0], t.path[1]), 1e-15);
    }
    // The identity splits unevenly between the empty path and the path through both gates.
    EXPECT_NEAR(oracle(0, 0), 0.45534180126147955, 1e-12);
    EXPECT_NEAR(oracle(1, 1), -0.12200846792814621, 1e-12);
}

TEST(Circuit, PurifierOnDepolarizedInputs) {
    const double delta = 0.3;
    const auto lcu = apply_purifier(lcu_purifier(2, 2), depolarized_zero(2, delta, 2));
    EXPECT_NEAR(lcu.success_probability, 0.8725, 1e-10);
    EXPECT_NEAR(lcu.sigma(0, 0).real(), golden_point(EigenSpectrum::depolarizing(2, delta)).f, 1e-10);
    const auto three = apply_purifier(three_copy_circuit(), depolarized_zero(2, delta, 3));
    const auto cf = three_copy_closed_form(delta);
    EXPECT_NEAR(three.success_probability, 0.745, 1e-10);
    EXPECT_NEAR(three.sigma(0, 0).real(), cf.f, 1e-10);
    EXPECT_NEAR(three.sigma(0, 0).real(), 0.929866, 1e-6);
    EXPECT_NEAR(three.sigma.trace().real(), 1.0, 1e-12);
}

TEST(Circuit, PurifierMatchesDirectProjection) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const int d = 2 + trial % 2;
        const int n = 2 + trial % 2;
        const ComplexMatrix rho = random_state(rng, d);
        const ComplexMatrix in = kron_power(rho, n);
        const auto out = apply_purifier(lcu_purifier(n, d), in);
        const ComplexMatrix pi = symmetric_projector(n, d);
        const ComplexMatrix direct = pi * in * pi;
        EXPECT_NEAR(out.success_probability, direct.trace().real(), 1e-10);
        ComplexMatrix s = partial_trace(direct, {1});
        s *= Complex(1.0 / direct.trace().real());
        EXPECT_LT((s.entries() - out.sigma.entries()).norm(), 1e-10);
    }
}

TEST(Circuit, PurifierFixesSymmetricPureStates) {
    Vec psi(2);
    psi << Complex(0.6, 0.0), Complex(0.0, 0.8);
    const ComplexMatrix one = ComplexMatrix::outer(SubsystemShape({2}), psi);
    const auto out = apply_purifier(three_copy_circuit(), kron_power(one, 3));
    EXPECT_NEAR(out.success_probability, 1.0, 1e-12);
    EXPECT_LT((out.sigma.entries() - one.entries()).norm(), 1e-12);
}

TEST(Circuit, PurifierErrors) {
    const auto be = lcu_purifier(2, 2);
    Vec v = Vec::Zero(4);
    v(1) = 1.0;
    v(2) = -1.0;
    v /= std::sqrt(2.0);
    // The antisymmetric singlet is annihilated by Π2.
    EXPECT_THROW(apply_purifier(be, ComplexMatrix::outer(SubsystemShape::uniform(2, 2), v)), PostSelectionFailed);
    EXPECT_THROW(apply_purifier(be, ComplexMatrix::identity(SubsystemShape::uniform(2, 2))), InvalidArgument);
    EXPECT_THROW(apply_purifier(be, depolarized_zero(2, 0.1, 3)), DimensionMismatch);
}

TEST(Circuit, FourCopyAllZeroAngles) {
    const auto be = four_copy_ansatz(std::vector<double>(6, 0.0));
    const Mat i = Mat::Identity(16, 16);
    EXPECT_LT((be.block.entries() - i).norm(), 1e-15);
    EXPECT_NEAR(be.residual_to_target, (i - symmetric_projector(4, 2).entries()).norm(), 1e-14);
    EXPECT_THROW(four_copy_ansatz({0.0, 1.0}), DimensionMismatch);
}

TEST(Circuit, NetlistAndBudget) {
    const std::string net = to_netlist(three_copy_circuit().circuit);
    EXPECT_NE(net.find("CPERM +1 (123) anc[1] 1 2 3\n"), std::string::npos);
    EXPECT_EQ(std::count(net.begin(), net.end(), '\n'), 5);
    EXPECT_EQ(net.rfind("RY ", 0), 0u);
    EXPECT_NE(to_netlist(lcu_purifier(2, 2).circuit).find("PREP anc"), std::string::npos);
    EXPECT_THROW(lcu_purifier(4, 5), BudgetExceeded);
    QuantumCircuit c(3, 2, 2);
    EXPECT_THROW(c.ry(0.1), InvalidArgument);
}

TEST(Circuit, FourCopyTrainingOnExtendedSequence) {
    const auto a = train_four_copy(7, 4, extended_four_copy_sequence());
    EXPECT_LE(a.encoding.residual_to_target, kFourCopyTarget);
    EXPECT_EQ(a.angles.size(), 8u);
    const auto b = train_four_copy(7, 4, extended_four_copy_sequence());
    ASSERT_EQ(a.angles.size(), b.angles.size());
    for (std::size_t k = 0; k < a.angles.size(); ++k) EXPECT_EQ(a.angles[k], b.angles[k]);
    EXPECT_EQ(a.seed, b.seed);

    // Success probability and fidelity on depolarized qubits follow the recursion.
    const auto pts = recursion_pn_fn(EigenSpectrum::depolarizing(2, 0.3), 4);
    const auto out = apply_purifier(a.encoding, depolarized_zero(2, 0.3, 4));
    EXPECT_NEAR(out.success_probability, pts[3].p, 1e-6);
    EXPECT_NEAR(out.sigma(0, 0).real(), pts[3].f, 1e-6);
}

TEST(Circuit, FiveSlotAnsatzStallsAboveTarget) {
    // The five-slot single-ancilla ansatz has a residual floor near 0.585.
    try {
        train_four_copy(7, 4);
        FAIL() << "five-slot training unexpectedly reached the target";
    } catch (const TrainingFailed& e) {
        EXPECT_GE(e.best_residual(), 0.5849285594654 - 1e-8);
    }
}

TEST(Circuit, OrderingSearchBeatsAnyFixedSequence) {
    const std::vector<double> angles{0.3, -1.2, 2.2, 0.7, -0.4, 1.9};
    const auto fit = best_four_copy_ordering(angles);
    ASSERT_EQ(fit.sequence.size(), 5u);
    EXPECT_LE(fit.residual, four_copy_ansatz(angles).residual_to_target + 1e-12);
    EXPECT_NEAR(four_copy_ansatz(angles, fit.sequence).residual_to_target, fit.residual, 1e-12);
    EXPECT_EQ(four_copy_pool().size(), 9u);
}
