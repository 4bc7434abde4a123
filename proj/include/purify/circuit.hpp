#pragma once

// Exact simulation of ancilla-controlled permutation circuits and the block
// encodings they realize.
//
// The register is ancilla ⊗ data with the ancilla outermost. Ancilla levels are
// numbered 0..ancilla_dim−1; the encoded block is (⟨0| ⊗ I) U (|0⟩ ⊗ I).

#include "purify/symgroup.hpp"
#include "purify/tensor.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace purify {

// Ry(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]] on ancilla qubit `qubit`
// (0 is the most significant qubit of the ancilla register).
struct RyGate {
    double theta;
    int qubit = 0;
};

// sign · P(perm) on the data when the ancilla is in `control_level`.
struct ControlledPermutation {
    int control_level;
    Permutation perm;
    int sign = 1;
};

// A unitary on the whole ancilla register.
struct AncillaUnitary {
    Mat unitary;
    std::string label = "V";
};

using Gate = std::variant<RyGate, ControlledPermutation, AncillaUnitary>;

class QuantumCircuit {
  public:
    QuantumCircuit(int ancilla_dim, int copies, int local_dim);

    int ancilla_dim() const noexcept { return ancilla_dim_; }
    int copies() const noexcept { return copies_; }
    int local_dim() const noexcept { return local_dim_; }
    std::int64_t data_dim() const noexcept { return data_dim_; }
    const std::vector<Gate>& gates() const noexcept { return gates_; }

    // Gates are applied in insertion order (the first added acts first).
    QuantumCircuit& ry(double theta, int qubit = 0);
    QuantumCircuit& controlled(int control_level, const Permutation& perm, int sign = 1);
    QuantumCircuit& prepare(const Mat& unitary, std::string label = "V");

  private:
    int ancilla_dim_;
    int copies_;
    int local_dim_;
    std::int64_t data_dim_;
    std::vector<Gate> gates_;
};

struct BlockEncoding {
    QuantumCircuit circuit;
    ComplexMatrix block;
    double residual_to_target;  // ‖block − Π_n‖_F
};

// Requires ancilla_dim · d^n ≤ 4096.
ComplexMatrix compile_to_unitary(const QuantumCircuit& c);

// (⟨0| ⊗ I) U (|0⟩ ⊗ I), propagated through the first d^n columns only.
ComplexMatrix extract_block(const QuantumCircuit& c);

BlockEncoding make_block_encoding(QuantumCircuit c);

// Householder reflection V = V† with V|0⟩ = Σ_{k<levels} |k⟩/√levels.
Mat uniform_preparation(int ancilla_dim, int levels);

// ⌈log2 n!⌉ ancilla qubits; V, then sign-free controlled P(c_k) for every
// non-identity c_k at level k, then V†.
BlockEncoding lcu_purifier(int n, int d);

inline constexpr double kThreeCopyAlpha = -0.9553166181245093;  // −arctan √2
inline constexpr double kThreeCopyBeta = 1.9106332362490186;    // arccos(−1/3)

// Ry(α), C-P((123)), Ry(β), C-P((132)), Ry(γ) with γ = α; qubits, one ancilla.
BlockEncoding three_copy_circuit();

// Sum over ancilla paths of a single-qubit-ancilla circuit built from Ry and
// level-1 controlled permutations: block = Σ weight · P(product).
struct BranchTerm {
    std::vector<int> path;  // ancilla level after each Ry
    Permutation product;
    double weight;
};
std::vector<BranchTerm> branch_expansion(const QuantumCircuit& c);

// One controlled permutation per slot, signs included.
struct FourCopySlot {
    Permutation perm;
    int sign = 1;
};
using FourCopySequence = std::vector<FourCopySlot>;

// The five-slot sequence used by the trainer when none is given.
FourCopySequence default_four_copy_sequence();

// A seven-slot sequence from the same pool that does reach Π4.
FourCopySequence extended_four_copy_sequence();

// Angles and slots alternate: Ry(a0), C-g1, Ry(a1), …, C-gL, Ry(aL).
// The contract ansatz has six angles and five slots from [4] ∪ [2,2].
BlockEncoding four_copy_ansatz(const std::vector<double>& angles);
BlockEncoding four_copy_ansatz(const std::vector<double>& angles, const FourCopySequence& sequence);

// Candidate controlled permutations: the classes [4] and [2,2] of S_4.
std::vector<Permutation> four_copy_pool();

struct OrderingFit {
    FourCopySequence sequence;
    double residual;
};

// Exhaustive search over five-slot sequences from four_copy_pool(), with either
// sign on [2,2] slots, for the one whose block at fixed angles is closest to Π4.
OrderingFit best_four_copy_ordering(const std::vector<double>& angles);

inline constexpr double kFourCopyTarget = 1e-6;

struct TrainingResult {
    std::vector<double> angles;
    BlockEncoding encoding;
    std::uint64_t seed;  // seed of the winning restart
    int restarts;
};

// Nelder–Mead on ‖block − Π4‖_F from random starts. Restart k uses seed + k and
// restarts run concurrently; the lowest residual wins, ties going to the lower
// seed. Throws TrainingFailed with the best residual when it stays above
// kFourCopyTarget.
TrainingResult train_four_copy(std::uint64_t seed, int max_restarts);
TrainingResult train_four_copy(std::uint64_t seed, int max_restarts, const FourCopySequence& sequence);

struct PurifierOutput {
    double success_probability;
    ComplexMatrix sigma;  // on the first data system
};

// B ρ B† with B the block; σ = tr_{2..n}[B ρ B†] / p.
PurifierOutput apply_purifier(const BlockEncoding& be, const ComplexMatrix& rho_in);

// One gate per line: `RY <theta> anc`, `CPERM <sign> <cycles> anc[<level>] <data labels>`, `PREP anc`.
std::string to_netlist(const QuantumCircuit& c);

}  // namespace purify
