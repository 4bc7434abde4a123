#pragma once

// Symmetric-group combinatorics and their operator representations on
// (C^d)^{⊗n}.

#include "purify/tensor.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace purify {

// A bijection of {1..n}. Composition reads right to left: (a*b)(x) = a(b(x)).
class Permutation {
  public:
    static Permutation identity(int n);
    // images[k] is the image of k+1 (1-based values).
    static Permutation from_one_line(std::vector<int> images);
    static Permutation from_cycles(int n, const std::vector<std::vector<int>>& cycles);
    // Cycle notation such as "(123)", "(12)(34)", "(1 2 3)", "(1,10)" or "(1)".
    static Permutation parse(int n, std::string_view cycle_notation);

    int degree() const noexcept { return static_cast<int>(images_.size()); }
    int operator()(int point) const;
    const std::vector<int>& one_line() const noexcept { return images_; }

    Permutation inverse() const;
    friend Permutation operator*(const Permutation& a, const Permutation& b);

    // Cycles of length >= 2, each starting at its smallest element.
    std::vector<std::vector<int>> cycles() const;
    // Number of cycles including fixed points.
    int cycle_count() const;
    bool is_identity() const;
    // "(1)" for the identity; digits are run together when n <= 9.
    std::string to_cycle_notation() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

  private:
    explicit Permutation(std::vector<int> images) : images_(std::move(images)) {}
    std::vector<int> images_;
};

// Cycle multiplicities v_1..v_n with sum_j j·v_j = n.
class CycleType {
  public:
    explicit CycleType(std::vector<int> multiplicities);
    static CycleType of(const Permutation& p);
    // Partition with parts in descending order.
    static CycleType from_partition(const std::vector<int>& parts);

    int degree() const noexcept { return static_cast<int>(multiplicities_.size()); }
    int multiplicity(int length) const;
    const std::vector<int>& multiplicities() const noexcept { return multiplicities_; }
    std::vector<int> partition() const;  // descending
    std::string label() const;           // e.g. "[2,2]"

    friend bool operator==(const CycleType&, const CycleType&) = default;

  private:
    std::vector<int> multiplicities_;
};

struct ConjugacyClass {
    CycleType cycle_type;
    std::uint64_t size;
    Permutation representative;
};

std::uint64_t factorial(int n);

// binom(n+d-1, n)
std::uint64_t sym_dim(int n, int d);

// All classes of S_n, identity first, ordered by decreasing number of cycles.
// The representative fills consecutive labels from 1, longest cycle first,
// e.g. (12) for [2,1] and (12)(34) for [2,2].
std::vector<ConjugacyClass> conjugacy_classes(int n);

// Every element of S_n in lexicographic one-line order (n <= 8).
std::vector<Permutation> all_permutations(int n);

// P(c)|i_1…i_n> = |i_{c⁻¹(1)} … i_{c⁻¹(n)}>, a homomorphism: P(ab) = P(a)P(b).
ComplexMatrix permutation_operator(const Permutation& c, int d);

// Orthogonal projector onto the symmetric subspace of (C^d)^{⊗n}.
ComplexMatrix symmetric_projector(int n, int d);

// (1/n!) Σ_classes |class| · P(representative)
ComplexMatrix class_representative_projector(int n, int d);

// Π_n · m for an operator m on (C^d)^{⊗n}; never forms Π_n densely.
Mat apply_symmetrizer_left(const Mat& m, int n, int d);

// Largest dense dimension d^n accepted by the operator constructors.
inline constexpr std::int64_t kMaxDenseDim = 4096;

}  // namespace purify
