#pragma once

#include "purify/tensor.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace purify {

enum class ChannelKind { Depolarizing, Pauli, AmplitudeDamping, Custom };

std::string to_string(ChannelKind kind);

// Trace-preserving channel on C^d in Kraus form.
class NoiseChannel {
  public:
    // Throws InvalidArgument unless Σ K†K = I within 1e-10.
    NoiseChannel(std::vector<Mat> kraus, ChannelKind kind = ChannelKind::Custom,
                 std::optional<double> delta = std::nullopt);

    const std::vector<Mat>& kraus() const noexcept { return kraus_; }
    ChannelKind kind() const noexcept { return kind_; }
    std::optional<double> delta() const noexcept { return delta_; }
    int dim() const noexcept { return static_cast<int>(kraus_.front().rows()); }

  private:
    std::vector<Mat> kraus_;
    ChannelKind kind_;
    std::optional<double> delta_;
};

NoiseChannel identity_channel(int d);

// ρ ↦ (1−δ)ρ + δ I/d, Kraus operators X^a Z^b.
NoiseChannel depolarizing(int d, double delta);

// K0 = √(1−0.75δ) I, K1 = √(0.1δ) X, K2 = √(0.2δ) Y, K3 = √(0.45δ) Z.
// d = 4 uses the products K_j ⊗ K_k.
NoiseChannel pauli_preset(double delta, int d = 2);

// K0 = |0><0| + √(1−δ)|1><1|, K1 = √δ |0><1|.
NoiseChannel amplitude_damping(double delta);

ComplexMatrix apply(const NoiseChannel& ch, const ComplexMatrix& m);

// N^{⊗n} on an operator over (C^d)^{⊗n}.
ComplexMatrix apply_tensor_power(const NoiseChannel& ch, int n, const ComplexMatrix& m);

// N applied on each listed subsystem, identity elsewhere.
ComplexMatrix apply_on(const NoiseChannel& ch, const ComplexMatrix& m, const SubsystemSet& labels);

struct ChoiOperator {
    ComplexMatrix matrix;  // input ⊗ output
    int input_dim;
    int output_dim;
};

// J = Σ_ij |i><j| ⊗ N(|i><j|)
ChoiOperator choi(const NoiseChannel& ch);

using LinearMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

// Choi operator of an arbitrary linear map, built from its action on |i><j|.
ChoiOperator choi_of_map(const LinearMap& map, const SubsystemShape& input, const SubsystemShape& output);

// tr_in[J (ρ^T ⊗ I)]
ComplexMatrix apply_choi(const ChoiOperator& j, const ComplexMatrix& rho);

struct MomentOperators {
    ComplexMatrix q;  // (N^{⊗n} ⊗ id)(Π_{n+1}) / D(n+1,d)
    ComplexMatrix r;  // N^{⊗n}(Π_n) / D(n,d) ⊗ I_d
    int n;
    int d;
};

// Requires d^{n+1} ≤ 256.
MomentOperators moment_operators(const NoiseChannel& ch, int n);

}  // namespace purify
