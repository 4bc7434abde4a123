#pragma once

// Closed forms and recursions for the symmetric-projection protocol.

#include "purify/channels.hpp"
#include "purify/tensor.hpp"

#include <vector>

namespace purify {

// Spectrum of the noisy input, largest eigenvalue first.
class EigenSpectrum {
  public:
    static EigenSpectrum depolarizing(int d, double delta);
    // Sorted into descending order; must be nonnegative and sum to 1.
    static EigenSpectrum from_values(std::vector<double> lambdas);

    const std::vector<double>& lambdas() const noexcept { return lambdas_; }
    int dim() const noexcept { return static_cast<int>(lambdas_.size()); }
    double lambda0() const { return lambdas_.front(); }
    // NaN unless built from a depolarizing parameter.
    double delta() const noexcept { return delta_; }
    // tr Λ^j
    double power_trace(int j) const;

  private:
    EigenSpectrum(std::vector<double> lambdas, double delta);
    std::vector<double> lambdas_;
    double delta_;
};

struct PurificationPoint {
    int n;
    double p;
    double f;
};

// p_n = (1/n) Σ_{j=1..n} p_{n−j} tr Λ^j,  f_n = Σ_j p_{n−j} λ0^j / (n p_n),  p_0 = 1.
std::vector<PurificationPoint> recursion_pn_fn(const EigenSpectrum& spec, int n_max);

// (2, (1 + tr Λ²)/2, (λ0 + λ0²)/(2 p_2))
PurificationPoint golden_point(const EigenSpectrum& spec);

struct ThreeCopyClosedForm {
    double p;
    double delta_prime;
    double f;
};

// Qubit only: p = 1 − δ + δ²/2, δ' = (2δ + δ³)/(6p), f = 1 − δ'/2.
ThreeCopyClosedForm three_copy_closed_form(double delta, int d = 2);

// Dense evaluation of tr[Π_n Λ^{⊗n}] and <0|tr_{2..n}[Π_n Λ^{⊗n} Π_n]|0>/p_n. Needs d^n ≤ 4096.
PurificationPoint brute_force_pn_fn(const EigenSpectrum& spec, int n);

// Choi operator of tr_{2..n}[Π_n (·) Π_n], input (C^d)^{⊗n} first.
ChoiOperator symmetric_protocol_choi(int n, int d);

// p = tr[J R^{T}], f = tr[J Q^{T}]/p with the transposes on the n input systems.
// Needs d^{n+1} ≤ 256.
PurificationPoint evaluate_protocol(const NoiseChannel& ch, int n);

struct SampleComplexityResult {
    int n;
    double expected_copies;
    double achieved_f;
};

// Smallest n with f_n ≥ f_goal under the depolarizing recursion.
// Throws UnreachableGoal once n passes `cap`.
SampleComplexityResult sample_complexity(double delta, int d, double f_goal, int cap = 10000);

struct RecursiveTrace {
    int n;
    int depth;
    std::vector<ComplexMatrix> states;     // level 0 is the noisy input
    std::vector<double> success_probs;     // level 0 is 1
    std::vector<double> fidelities;
};

// σ_k = tr_{2..n}[Π σ_{k−1}^{⊗n} Π] / tr[Π σ_{k−1}^{⊗n}], starting from N(ideal).
// Fidelities are taken against the top eigenvector of σ_0.
RecursiveTrace recursive_protocol(const NoiseChannel& ch, int n, int depth);
RecursiveTrace recursive_protocol(const NoiseChannel& ch, int n, int depth, const Vec& ideal);

}  // namespace purify
