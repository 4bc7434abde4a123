#include "purify/symgroup.hpp"

#include "purify/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

namespace purify {

namespace {

void check_degree(int n) {
    if (n < 1) throw InvalidArgument("permutation degree must be >= 1");
}

std::int64_t dense_dim(int n, int d) {
    if (d < 2) throw InvalidArgument("local dimension must be >= 2");
    std::int64_t total = 1;
    for (int k = 0; k < n; ++k) {
        total *= d;
        if (total > kMaxDenseDim) {
            throw BudgetExceeded("d^n = " + std::to_string(d) + "^" + std::to_string(n) +
                                 " exceeds the dense budget " + std::to_string(kMaxDenseDim));
        }
    }
    return total;
}

std::vector<int> digits_of(std::int64_t idx, int n, int d) {
    std::vector<int> digits(static_cast<std::size_t>(n));
    for (int k = n - 1; k >= 0; --k) {
        digits[static_cast<std::size_t>(k)] = static_cast<int>(idx % d);
        idx /= d;
    }
    return digits;
}

// Occupation class of every basis index plus the size of each class.
struct SymmetricTypes {
    std::vector<int> type_of;
    std::vector<std::int64_t> class_size;
};

SymmetricTypes symmetric_types(int n, int d) {
    const std::int64_t total = dense_dim(n, d);
    SymmetricTypes out;
    out.type_of.resize(static_cast<std::size_t>(total));
    std::map<std::vector<int>, int> ids;
    for (std::int64_t idx = 0; idx < total; ++idx) {
        std::vector<int> occ(static_cast<std::size_t>(d), 0);
        std::int64_t rem = idx;
        for (int k = 0; k < n; ++k) {
            ++occ[static_cast<std::size_t>(rem % d)];
            rem /= d;
        }
        auto [it, inserted] = ids.emplace(std::move(occ), static_cast<int>(ids.size()));
        if (inserted) out.class_size.push_back(0);
        out.type_of[static_cast<std::size_t>(idx)] = it->second;
        ++out.class_size[static_cast<std::size_t>(it->second)];
    }
    return out;
}

void partitions_into(int remaining, int max_part, std::vector<int>& current,
                     std::vector<std::vector<int>>& out) {
    if (remaining == 0) {
        out.push_back(current);
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        current.push_back(part);
        partitions_into(remaining - part, part, current, out);
        current.pop_back();
    }
}

}  // namespace

Permutation Permutation::identity(int n) {
    check_degree(n);
    std::vector<int> images(static_cast<std::size_t>(n));
    std::iota(images.begin(), images.end(), 1);
    return Permutation(std::move(images));
}

Permutation Permutation::from_one_line(std::vector<int> images) {
    const int n = static_cast<int>(images.size());
    check_degree(n);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : images) {
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)]) {
            throw InvalidArgument("one-line notation is not a bijection of {1..n}");
        }
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
    return Permutation(std::move(images));
}

Permutation Permutation::from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
    check_degree(n);
    std::vector<int> images(static_cast<std::size_t>(n));
    std::iota(images.begin(), images.end(), 1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (const auto& cycle : cycles) {
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            const int from = cycle[k];
            const int to = cycle[(k + 1) % cycle.size()];
            if (from < 1 || from > n) throw InvalidArgument("cycle entry outside {1..n}");
            if (used[static_cast<std::size_t>(from - 1)]) {
                throw InvalidArgument("cycles are not disjoint");
            }
            used[static_cast<std::size_t>(from - 1)] = true;
            images[static_cast<std::size_t>(from - 1)] = to;
        }
    }
    return Permutation(std::move(images));
}

Permutation Permutation::parse(int n, std::string_view text) {
    std::vector<std::vector<int>> cycles;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const char ch = text[pos];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++pos;
            continue;
        }
        if (ch != '(') throw InvalidArgument("expected '(' in cycle notation: " + std::string(text));
        const auto close = text.find(')', pos);
        if (close == std::string_view::npos) {
            throw InvalidArgument("unterminated cycle in: " + std::string(text));
        }
        std::string_view body = text.substr(pos + 1, close - pos - 1);
        const bool separated = body.find_first_of(", ") != std::string_view::npos;
        std::vector<int> cycle;
        if (separated) {
            std::size_t i = 0;
            while (i < body.size()) {
                while (i < body.size() && (body[i] == ',' || body[i] == ' ')) ++i;
                std::size_t j = i;
                while (j < body.size() && std::isdigit(static_cast<unsigned char>(body[j]))) ++j;
                if (j == i) {
                    if (i < body.size()) throw InvalidArgument("bad cycle entry in: " + std::string(text));
                    break;
                }
                cycle.push_back(std::stoi(std::string(body.substr(i, j - i))));
                i = j;
            }
        } else {
            for (char c : body) {
                if (!std::isdigit(static_cast<unsigned char>(c))) {
                    throw InvalidArgument("bad cycle entry in: " + std::string(text));
                }
                cycle.push_back(c - '0');
            }
        }
        if (cycle.size() > 1) cycles.push_back(std::move(cycle));
        pos = close + 1;
    }
    return from_cycles(n, cycles);
}

int Permutation::operator()(int point) const {
    if (point < 1 || point > degree()) throw IndexOutOfRange("permutation point outside {1..n}");
    return images_[static_cast<std::size_t>(point - 1)];
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(images_.size());
    for (std::size_t k = 0; k < images_.size(); ++k) {
        inv[static_cast<std::size_t>(images_[k] - 1)] = static_cast<int>(k) + 1;
    }
    return Permutation(std::move(inv));
}

Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree()) throw DimensionMismatch("composing permutations of different degree");
    std::vector<int> images(b.images_.size());
    for (std::size_t k = 0; k < images.size(); ++k) {
        images[k] = a.images_[static_cast<std::size_t>(b.images_[k] - 1)];
    }
    return Permutation(std::move(images));
}

std::vector<std::vector<int>> Permutation::cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(images_.size(), false);
    for (int start = 1; start <= degree(); ++start) {
        if (seen[static_cast<std::size_t>(start - 1)]) continue;
        std::vector<int> cycle;
        int p = start;
        while (!seen[static_cast<std::size_t>(p - 1)]) {
            seen[static_cast<std::size_t>(p - 1)] = true;
            cycle.push_back(p);
            p = images_[static_cast<std::size_t>(p - 1)];
        }
        if (cycle.size() > 1) out.push_back(std::move(cycle));
    }
    return out;
}

int Permutation::cycle_count() const {
    int moved = 0;
    const auto cs = cycles();
    for (const auto& c : cs) moved += static_cast<int>(c.size());
    return static_cast<int>(cs.size()) + (degree() - moved);
}

bool Permutation::is_identity() const {
    for (std::size_t k = 0; k < images_.size(); ++k) {
        if (images_[k] != static_cast<int>(k) + 1) return false;
    }
    return true;
}

std::string Permutation::to_cycle_notation() const {
    const auto cs = cycles();
    if (cs.empty()) return "(1)";
    const bool compact = degree() <= 9;
    std::string out;
    for (const auto& c : cs) {
        out += '(';
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (!compact && k > 0) out += ',';
            out += std::to_string(c[k]);
        }
        out += ')';
    }
    return out;
}

CycleType::CycleType(std::vector<int> multiplicities) : multiplicities_(std::move(multiplicities)) {
    int total = 0;
    for (std::size_t j = 0; j < multiplicities_.size(); ++j) {
        if (multiplicities_[j] < 0) throw InvalidArgument("negative cycle multiplicity");
        total += static_cast<int>(j + 1) * multiplicities_[j];
    }
    if (total != degree() || degree() < 1) {
        throw InvalidArgument("cycle multiplicities must satisfy sum_j j*v_j = n");
    }
}

CycleType CycleType::of(const Permutation& p) {
    std::vector<int> mult(static_cast<std::size_t>(p.degree()), 0);
    int moved = 0;
    for (const auto& c : p.cycles()) {
        ++mult[c.size() - 1];
        moved += static_cast<int>(c.size());
    }
    mult[0] += p.degree() - moved;
    return CycleType(std::move(mult));
}

CycleType CycleType::from_partition(const std::vector<int>& parts) {
    const int n = std::accumulate(parts.begin(), parts.end(), 0);
    if (n < 1) throw InvalidArgument("empty partition");
    std::vector<int> mult(static_cast<std::size_t>(n), 0);
    for (int part : parts) {
        if (part < 1) throw InvalidArgument("partition parts must be positive");
        ++mult[static_cast<std::size_t>(part - 1)];
    }
    return CycleType(std::move(mult));
}

int CycleType::multiplicity(int length) const {
    if (length < 1 || length > degree()) return 0;
    return multiplicities_[static_cast<std::size_t>(length - 1)];
}

std::vector<int> CycleType::partition() const {
    std::vector<int> parts;
    for (int len = degree(); len >= 1; --len) {
        for (int k = 0; k < multiplicity(len); ++k) parts.push_back(len);
    }
    return parts;
}

std::string CycleType::label() const {
    std::string out = "[";
    bool first = true;
    for (int part : partition()) {
        if (part == 1) continue;
        if (!first) out += ',';
        out += std::to_string(part);
        first = false;
    }
    if (first) out += "1";
    return out + "]";
}

std::uint64_t factorial(int n) {
    if (n < 0 || n > 20) throw InvalidArgument("factorial argument outside 0..20");
    std::uint64_t out = 1;
    for (int k = 2; k <= n; ++k) out *= static_cast<std::uint64_t>(k);
    return out;
}

std::uint64_t sym_dim(int n, int d) {
    if (n < 1) throw InvalidArgument("sym_dim needs n >= 1");
    if (d < 2) throw InvalidArgument("sym_dim needs d >= 2");
    // binom(n+d-1, d-1) built incrementally; each partial product is an integer.
    std::uint64_t out = 1;
    for (int k = 1; k <= d - 1; ++k) {
        out = out * static_cast<std::uint64_t>(n + k) / static_cast<std::uint64_t>(k);
    }
    return out;
}

std::vector<ConjugacyClass> conjugacy_classes(int n) {
    if (n < 1 || n > 12) throw InvalidArgument("conjugacy_classes supports 1 <= n <= 12");
    std::vector<std::vector<int>> parts;
    std::vector<int> current;
    partitions_into(n, n, current, parts);
    // identity ([1^n]) first: more cycles first, ties broken lexicographically.
    std::stable_sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    });

    std::vector<ConjugacyClass> out;
    const std::uint64_t nfact = factorial(n);
    for (const auto& partition : parts) {
        CycleType type = CycleType::from_partition(partition);
        std::uint64_t denom = 1;
        for (int len = 1; len <= n; ++len) {
            const int v = type.multiplicity(len);
            for (int k = 0; k < v; ++k) denom *= static_cast<std::uint64_t>(len);
            denom *= factorial(v);
        }
        std::vector<std::vector<int>> cycles;
        int next = 1;
        for (int len : partition) {  // descending
            std::vector<int> cycle;
            for (int k = 0; k < len; ++k) cycle.push_back(next++);
            if (len > 1) cycles.push_back(std::move(cycle));
        }
        out.push_back(ConjugacyClass{type, nfact / denom, Permutation::from_cycles(n, cycles)});
    }
    return out;
}

std::vector<Permutation> all_permutations(int n) {
    if (n < 1 || n > 8) throw InvalidArgument("all_permutations supports 1 <= n <= 8");
    std::vector<int> images(static_cast<std::size_t>(n));
    std::iota(images.begin(), images.end(), 1);
    std::vector<Permutation> out;
    do {
        out.push_back(Permutation::from_one_line(images));
    } while (std::next_permutation(images.begin(), images.end()));
    return out;
}

ComplexMatrix permutation_operator(const Permutation& c, int d) {
    const int n = c.degree();
    const std::int64_t total = dense_dim(n, d);
    // Output position c(j) carries input digit j.
    std::vector<std::int64_t> stride(static_cast<std::size_t>(n));
    std::int64_t s = 1;
    for (int k = n - 1; k >= 0; --k) {
        stride[static_cast<std::size_t>(k)] = s;
        s *= d;
    }
    Mat m = Mat::Zero(total, total);
    for (std::int64_t in = 0; in < total; ++in) {
        const auto digits = digits_of(in, n, d);
        std::int64_t out = 0;
        for (int j = 1; j <= n; ++j) {
            out += digits[static_cast<std::size_t>(j - 1)] * stride[static_cast<std::size_t>(c(j) - 1)];
        }
        m(out, in) = 1.0;
    }
    return ComplexMatrix(SubsystemShape::uniform(d, n), std::move(m));
}

ComplexMatrix symmetric_projector(int n, int d) {
    if (n < 1) throw InvalidArgument("symmetric_projector needs n >= 1");
    const SymmetricTypes types = symmetric_types(n, d);
    const auto total = static_cast<Eigen::Index>(types.type_of.size());
    // Π = Σ_types |S_t><S_t| with |S_t> the uniform superposition of the class.
    Mat m = Mat::Zero(total, total);
    for (Eigen::Index j = 0; j < total; ++j) {
        const int tj = types.type_of[static_cast<std::size_t>(j)];
        const double w = 1.0 / static_cast<double>(types.class_size[static_cast<std::size_t>(tj)]);
        for (Eigen::Index i = 0; i < total; ++i) {
            if (types.type_of[static_cast<std::size_t>(i)] == tj) m(i, j) = w;
        }
    }
    return ComplexMatrix(SubsystemShape::uniform(d, n), std::move(m));
}

ComplexMatrix class_representative_projector(int n, int d) {
    const std::int64_t total = dense_dim(n, d);
    const auto classes = conjugacy_classes(n);
    const double nfact = static_cast<double>(factorial(n));
    Mat m = Mat::Zero(total, total);
    for (const auto& cls : classes) {
        m += (static_cast<double>(cls.size) / nfact) * permutation_operator(cls.representative, d).entries();
    }
    return ComplexMatrix(SubsystemShape::uniform(d, n), std::move(m));
}

Mat apply_symmetrizer_left(const Mat& m, int n, int d) {
    const SymmetricTypes types = symmetric_types(n, d);
    const auto total = static_cast<Eigen::Index>(types.type_of.size());
    if (m.rows() != total) throw DimensionMismatch("apply_symmetrizer_left: row count is not d^n");
    const auto ntypes = static_cast<Eigen::Index>(types.class_size.size());
    Mat sums = Mat::Zero(ntypes, m.cols());
    for (Eigen::Index i = 0; i < total; ++i) {
        sums.row(types.type_of[static_cast<std::size_t>(i)]) += m.row(i);
    }
    for (Eigen::Index t = 0; t < ntypes; ++t) {
        sums.row(t) /= static_cast<double>(types.class_size[static_cast<std::size_t>(t)]);
    }
    Mat out(total, m.cols());
    for (Eigen::Index i = 0; i < total; ++i) {
        out.row(i) = sums.row(types.type_of[static_cast<std::size_t>(i)]);
    }
    return out;
}

}  // namespace purify
