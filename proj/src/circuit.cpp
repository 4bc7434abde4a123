#include "purify/circuit.hpp"

#include "purify/errors.hpp"
#include "purify/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace purify {

namespace {

int ancilla_qubits(int ancilla_dim) {
    int k = 0;
    while ((1 << k) < ancilla_dim) ++k;
    return (1 << k) == ancilla_dim ? k : -1;
}

// map[idx] is the row that P(c) sends basis row idx to.
std::vector<Eigen::Index> permutation_rows(const Permutation& c, int d) {
    const int n = c.degree();
    Eigen::Index dim = 1;
    for (int k = 0; k < n; ++k) dim *= d;
    std::vector<Eigen::Index> place(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        Eigen::Index w = 1;
        for (int k = c(j); k < n; ++k) w *= d;
        place[static_cast<std::size_t>(j - 1)] = w;
    }
    std::vector<Eigen::Index> map(static_cast<std::size_t>(dim));
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        Eigen::Index rest = idx, out = 0;
        for (int j = n; j >= 1; --j) {
            out += (rest % d) * place[static_cast<std::size_t>(j - 1)];
            rest /= d;
        }
        map[static_cast<std::size_t>(idx)] = out;
    }
    return map;
}

struct Simulator {
    const QuantumCircuit& c;
    Eigen::Index D;
    std::vector<std::vector<Eigen::Index>> maps;  // one per gate, empty unless controlled

    explicit Simulator(const QuantumCircuit& circuit) : c(circuit), D(circuit.data_dim()) {
        for (const Gate& g : c.gates()) {
            if (const auto* cp = std::get_if<ControlledPermutation>(&g)) {
                maps.push_back(permutation_rows(cp->perm, c.local_dim()));
            } else {
                maps.emplace_back();
            }
        }
    }

    void run(Mat& s) const {
        const int qubits = ancilla_qubits(c.ancilla_dim());
        for (std::size_t gi = 0; gi < c.gates().size(); ++gi) {
            const Gate& g = c.gates()[gi];
            if (const auto* ry = std::get_if<RyGate>(&g)) {
                const double co = std::cos(ry->theta / 2.0), si = std::sin(ry->theta / 2.0);
                const int bit = 1 << (qubits - 1 - ry->qubit);
                for (int a = 0; a < c.ancilla_dim(); ++a) {
                    if (a & bit) continue;
                    const int b = a | bit;
                    Mat lo = s.middleRows(a * D, D);
                    Mat hi = s.middleRows(b * D, D);
                    s.middleRows(a * D, D) = co * lo - si * hi;
                    s.middleRows(b * D, D) = si * lo + co * hi;
                }
            } else if (const auto* cp = std::get_if<ControlledPermutation>(&g)) {
                const auto& map = maps[gi];
                const Eigen::Index base = static_cast<Eigen::Index>(cp->control_level) * D;
                Mat blk = s.middleRows(base, D);
                for (Eigen::Index i = 0; i < D; ++i) {
                    s.row(base + map[static_cast<std::size_t>(i)]) = static_cast<double>(cp->sign) * blk.row(i);
                }
            } else {
                const Mat& u = std::get<AncillaUnitary>(g).unitary;
                Mat out = Mat::Zero(s.rows(), s.cols());
                for (int a = 0; a < c.ancilla_dim(); ++a) {
                    for (int b = 0; b < c.ancilla_dim(); ++b) {
                        if (u(a, b) != Complex(0.0)) out.middleRows(a * D, D) += u(a, b) * s.middleRows(b * D, D);
                    }
                }
                s = std::move(out);
            }
        }
    }
};

void check_budget(const QuantumCircuit& c) {
    if (static_cast<std::int64_t>(c.ancilla_dim()) * c.data_dim() > kMaxDenseDim) {
        throw BudgetExceeded("circuit needs ancilla_dim * d^n <= " + std::to_string(kMaxDenseDim));
    }
}

double residual(const ComplexMatrix& block, const ComplexMatrix& target) {
    return (block.entries() - target.entries()).norm();
}

void check_four_copy_sequence(const FourCopySequence& seq) {
    for (const auto& slot : seq) {
        if (slot.perm.degree() != 4) throw InvalidArgument("four-copy slots must be permutations of 4 points");
        if (slot.sign != 1 && slot.sign != -1) throw InvalidArgument("slot sign must be +1 or -1");
    }
}

// Derivative-free simplex minimizer.
struct NelderMead {
    int max_evals = 4000;
    double f_tol = 1e-26;

    template <typename F>
    std::pair<std::vector<double>, double> minimize(const F& f, std::vector<double> x0, double step) const {
        const std::size_t n = x0.size();
        std::vector<std::vector<double>> pts(n + 1, x0);
        for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
        std::vector<double> val(n + 1);
        for (std::size_t i = 0; i <= n; ++i) val[i] = f(pts[i]);
        int evals = static_cast<int>(n + 1);
        std::vector<std::size_t> order(n + 1);
        auto blend = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
            std::vector<double> r(n);
            for (std::size_t i = 0; i < n; ++i) r[i] = a[i] + t * (b[i] - a[i]);
            return r;
        };
        while (evals < max_evals) {
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
            const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
            if (val[best] < f_tol || std::abs(val[worst] - val[best]) < 1e-30) break;
            std::vector<double> centroid(n, 0.0);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[order[k]][i] / static_cast<double>(n);
            const auto xr = blend(centroid, pts[worst], -1.0);
            const double fr = f(xr);
            ++evals;
            if (fr < val[best]) {
                const auto xe = blend(centroid, pts[worst], -2.0);
                const double fe = f(xe);
                ++evals;
                if (fe < fr) {
                    pts[worst] = xe;
                    val[worst] = fe;
                } else {
                    pts[worst] = xr;
                    val[worst] = fr;
                }
            } else if (fr < val[second]) {
                pts[worst] = xr;
                val[worst] = fr;
            } else {
                const bool outside = fr < val[worst];
                const auto xc = blend(centroid, outside ? xr : pts[worst], 0.5);
                const double fc = f(xc);
                ++evals;
                if (fc < (outside ? fr : val[worst])) {
                    pts[worst] = xc;
                    val[worst] = fc;
                } else {
                    for (std::size_t k = 1; k <= n; ++k) {
                        pts[order[k]] = blend(pts[best], pts[order[k]], 0.5);
                        val[order[k]] = f(pts[order[k]]);
                    }
                    evals += static_cast<int>(n);
                }
            }
        }
        const auto it = std::min_element(val.begin(), val.end());
        return {pts[static_cast<std::size_t>(it - val.begin())], *it};
    }
};

}  // namespace

QuantumCircuit::QuantumCircuit(int ancilla_dim, int copies, int local_dim)
    : ancilla_dim_(ancilla_dim), copies_(copies), local_dim_(local_dim), data_dim_(1) {
    if (ancilla_dim < 1) throw InvalidArgument("ancilla dimension must be positive");
    if (copies < 1) throw InvalidArgument("circuit needs at least one data system");
    if (local_dim < 2) throw InvalidArgument("local dimension must be at least 2");
    for (int k = 0; k < copies; ++k) {
        data_dim_ *= local_dim;
        if (data_dim_ > kMaxDenseDim) throw BudgetExceeded("data register exceeds the dense budget");
    }
}

QuantumCircuit& QuantumCircuit::ry(double theta, int qubit) {
    const int qubits = ancilla_qubits(ancilla_dim_);
    if (qubits < 1) throw InvalidArgument("Ry needs a qubit ancilla register");
    if (qubit < 0 || qubit >= qubits) throw IndexOutOfRange("ancilla qubit out of range");
    gates_.push_back(RyGate{theta, qubit});
    return *this;
}

QuantumCircuit& QuantumCircuit::controlled(int control_level, const Permutation& perm, int sign) {
    if (control_level < 0 || control_level >= ancilla_dim_) throw IndexOutOfRange("control level out of range");
    if (perm.degree() != copies_) throw DimensionMismatch("permutation degree must equal the number of copies");
    if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
    gates_.push_back(ControlledPermutation{control_level, perm, sign});
    return *this;
}

QuantumCircuit& QuantumCircuit::prepare(const Mat& unitary, std::string label) {
    if (unitary.rows() != ancilla_dim_ || unitary.cols() != ancilla_dim_) {
        throw DimensionMismatch("ancilla unitary has the wrong size");
    }
    if ((unitary.adjoint() * unitary - Mat::Identity(ancilla_dim_, ancilla_dim_)).norm() > 1e-10) {
        throw InvalidArgument("ancilla operator is not unitary");
    }
    gates_.push_back(AncillaUnitary{unitary, std::move(label)});
    return *this;
}

ComplexMatrix compile_to_unitary(const QuantumCircuit& c) {
    check_budget(c);
    const Eigen::Index total = c.ancilla_dim() * c.data_dim();
    Mat u = Mat::Identity(total, total);
    Simulator(c).run(u);
    std::vector<int> dims{c.ancilla_dim()};
    for (int k = 0; k < c.copies(); ++k) dims.push_back(c.local_dim());
    return ComplexMatrix(SubsystemShape(dims), std::move(u));
}

ComplexMatrix extract_block(const QuantumCircuit& c) {
    check_budget(c);
    const Eigen::Index D = c.data_dim();
    Mat s = Mat::Zero(c.ancilla_dim() * D, D);
    s.topRows(D).setIdentity();
    Simulator(c).run(s);
    return ComplexMatrix(SubsystemShape::uniform(c.local_dim(), c.copies()), s.topRows(D));
}

BlockEncoding make_block_encoding(QuantumCircuit c) {
    ComplexMatrix block = extract_block(c);
    const double r = residual(block, symmetric_projector(c.copies(), c.local_dim()));
    return BlockEncoding{std::move(c), std::move(block), r};
}

Mat uniform_preparation(int ancilla_dim, int levels) {
    if (levels < 1 || levels > ancilla_dim) throw InvalidArgument("levels must lie in 1..ancilla_dim");
    Eigen::VectorXd w = Eigen::VectorXd::Zero(ancilla_dim);
    w.head(levels).setConstant(-1.0 / std::sqrt(static_cast<double>(levels)));
    w(0) += 1.0;
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(ancilla_dim, ancilla_dim);
    if (w.norm() > 1e-15) v -= 2.0 * w * w.transpose() / w.squaredNorm();
    return v.cast<Complex>();
}

BlockEncoding lcu_purifier(int n, int d) {
    if (n < 1 || n > 8) throw InvalidArgument("LCU purifier needs 1 <= n <= 8");
    const auto perms = all_permutations(n);
    const int levels = static_cast<int>(perms.size());
    int ancilla = 1;
    while (ancilla < levels) ancilla *= 2;
    QuantumCircuit c(ancilla, n, d);
    check_budget(c);
    const Mat v = uniform_preparation(ancilla, levels);
    c.prepare(v, "V");
    for (int k = 0; k < levels; ++k) {
        if (!perms[static_cast<std::size_t>(k)].is_identity()) c.controlled(k, perms[static_cast<std::size_t>(k)]);
    }
    c.prepare(v.adjoint(), "Vdg");
    return make_block_encoding(std::move(c));
}

BlockEncoding three_copy_circuit() {
    QuantumCircuit c(2, 3, 2);
    c.ry(kThreeCopyAlpha)
        .controlled(1, Permutation::parse(3, "(123)"))
        .ry(kThreeCopyBeta)
        .controlled(1, Permutation::parse(3, "(132)"))
        .ry(kThreeCopyAlpha);
    return make_block_encoding(std::move(c));
}

std::vector<BranchTerm> branch_expansion(const QuantumCircuit& c) {
    if (c.ancilla_dim() != 2) throw InvalidArgument("branch expansion needs a single ancilla qubit");
    struct Partial {
        std::vector<int> path;
        Permutation product;
        double weight;
        int level;
    };
    std::vector<Partial> live{{{}, Permutation::identity(c.copies()), 1.0, 0}};
    for (const Gate& g : c.gates()) {
        std::vector<Partial> next;
        if (const auto* ry = std::get_if<RyGate>(&g)) {
            const double co = std::cos(ry->theta / 2.0), si = std::sin(ry->theta / 2.0);
            const double r[2][2] = {{co, -si}, {si, co}};
            for (const auto& p : live) {
                for (int to = 0; to < 2; ++to) {
                    Partial q = p;
                    q.weight *= r[to][p.level];
                    q.level = to;
                    q.path.push_back(to);
                    if (q.weight != 0.0) next.push_back(std::move(q));
                }
            }
        } else if (const auto* cp = std::get_if<ControlledPermutation>(&g)) {
            for (auto p : live) {
                if (p.level == cp->control_level) {
                    p.product = cp->perm * p.product;
                    p.weight *= cp->sign;
                }
                next.push_back(std::move(p));
            }
        } else {
            throw InvalidArgument("branch expansion supports Ry and controlled permutations only");
        }
        live = std::move(next);
    }
    std::vector<BranchTerm> out;
    for (auto& p : live) {
        if (p.level == 0) out.push_back(BranchTerm{std::move(p.path), p.product, p.weight});
    }
    return out;
}

std::vector<Permutation> four_copy_pool() {
    std::vector<Permutation> pool;
    for (const auto& p : all_permutations(4)) {
        const auto part = CycleType::of(p).partition();
        if (part == std::vector<int>{4} || part == std::vector<int>{2, 2}) pool.push_back(p);
    }
    return pool;
}

OrderingFit best_four_copy_ordering(const std::vector<double>& angles) {
    if (angles.size() != 6) throw DimensionMismatch("ordering search needs six angles");
    const auto pool = four_copy_pool();
    struct Option {
        std::vector<Eigen::Index> rows;
        double sign;
        std::size_t perm;
    };
    std::vector<Option> options;
    for (std::size_t k = 0; k < pool.size(); ++k) {
        const auto rows = permutation_rows(pool[k], 2);
        options.push_back({rows, 1.0, k});
        if (CycleType::of(pool[k]).partition() == std::vector<int>{2, 2}) options.push_back({rows, -1.0, k});
    }
    const Eigen::MatrixXd target = symmetric_projector(4, 2).entries().real();
    std::vector<double> co(6), si(6);
    for (std::size_t k = 0; k < 6; ++k) {
        co[k] = std::cos(angles[k] / 2.0);
        si[k] = std::sin(angles[k] / 2.0);
    }
    const std::size_t m = options.size();
    std::size_t total = 1;
    for (int k = 0; k < 5; ++k) total *= m;

    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_choice(5, 0);
    std::vector<std::size_t> choice(5);
    Eigen::MatrixXd a0(16, 16), a1(16, 16), tmp(16, 16);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rest = code;
        for (int k = 4; k >= 0; --k) {
            choice[static_cast<std::size_t>(k)] = rest % m;
            rest /= m;
        }
        a0 = co[0] * Eigen::MatrixXd::Identity(16, 16);
        a1 = si[0] * Eigen::MatrixXd::Identity(16, 16);
        for (std::size_t k = 0; k < 5; ++k) {
            const Option& o = options[choice[k]];
            for (Eigen::Index i = 0; i < 16; ++i) tmp.row(o.rows[static_cast<std::size_t>(i)]) = o.sign * a1.row(i);
            a1 = si[k + 1] * a0 + co[k + 1] * tmp;
            a0 = co[k + 1] * a0 - si[k + 1] * tmp;
        }
        const double r = (a0 - target).norm();
        if (r < best) {
            best = r;
            best_choice = choice;
        }
    }
    FourCopySequence seq;
    for (std::size_t k : best_choice) seq.push_back({pool[options[k].perm], static_cast<int>(options[k].sign)});
    return OrderingFit{std::move(seq), best};
}

FourCopySequence default_four_copy_sequence() {
    return {{Permutation::parse(4, "(1234)")},
            {Permutation::parse(4, "(1243)")},
            {Permutation::parse(4, "(1324)")},
            {Permutation::parse(4, "(1234)")},
            {Permutation::parse(4, "(1324)")}};
}

FourCopySequence extended_four_copy_sequence() {
    FourCopySequence seq;
    for (const char* c : {"(1243)", "(1234)", "(13)(24)", "(1324)", "(14)(23)", "(1342)", "(1432)"}) {
        seq.push_back({Permutation::parse(4, c)});
    }
    return seq;
}

BlockEncoding four_copy_ansatz(const std::vector<double>& angles) {
    return four_copy_ansatz(angles, default_four_copy_sequence());
}

BlockEncoding four_copy_ansatz(const std::vector<double>& angles, const FourCopySequence& sequence) {
    check_four_copy_sequence(sequence);
    if (angles.size() != sequence.size() + 1) throw DimensionMismatch("need one more angle than controlled slots");
    QuantumCircuit c(2, 4, 2);
    c.ry(angles[0]);
    for (std::size_t k = 0; k < sequence.size(); ++k) {
        c.controlled(1, sequence[k].perm, sequence[k].sign);
        c.ry(angles[k + 1]);
    }
    return make_block_encoding(std::move(c));
}

TrainingResult train_four_copy(std::uint64_t seed, int max_restarts) {
    return train_four_copy(seed, max_restarts, default_four_copy_sequence());
}

TrainingResult train_four_copy(std::uint64_t seed, int max_restarts, const FourCopySequence& sequence) {
    if (max_restarts < 1) throw InvalidArgument("need at least one restart");
    check_four_copy_sequence(sequence);
    const Mat target = symmetric_projector(4, 2).entries();
    const std::size_t dim = sequence.size() + 1;

    struct Run {
        std::vector<double> angles;
        double value = std::numeric_limits<double>::infinity();
    };
    std::vector<Run> runs(static_cast<std::size_t>(max_restarts));
    parallel_for(runs.size(), [&](std::size_t k) {
        std::mt19937_64 rng(seed + k);
        std::uniform_real_distribution<double> u(-M_PI, M_PI);
        std::vector<double> x(dim);
        for (auto& a : x) a = u(rng);
        auto objective = [&](const std::vector<double>& a) {
            QuantumCircuit c(2, 4, 2);
            c.ry(a[0]);
            for (std::size_t s = 0; s < sequence.size(); ++s) {
                c.controlled(1, sequence[s].perm, sequence[s].sign);
                c.ry(a[s + 1]);
            }
            return (extract_block(c).entries() - target).squaredNorm();
        };
        NelderMead nm;
        double step = 0.5;
        Run best{x, objective(x)};
        // Restart the simplex around the incumbent a few times to escape stalls.
        for (int round = 0; round < 6 && best.value > 1e-24; ++round) {
            auto [xa, fa] = nm.minimize(objective, best.angles, step);
            if (fa < best.value) best = Run{xa, fa};
            step *= 0.3;
        }
        runs[k] = std::move(best);
    });

    std::size_t win = 0;
    for (std::size_t k = 1; k < runs.size(); ++k) {
        if (runs[k].value < runs[win].value) win = k;
    }
    BlockEncoding be = four_copy_ansatz(runs[win].angles, sequence);
    if (!(be.residual_to_target <= kFourCopyTarget)) {
        throw TrainingFailed("four-copy training did not reach residual " + std::to_string(kFourCopyTarget) +
                                 " (best " + std::to_string(be.residual_to_target) + ")",
                             be.residual_to_target);
    }
    return TrainingResult{runs[win].angles, std::move(be), seed + win, max_restarts};
}

PurifierOutput apply_purifier(const BlockEncoding& be, const ComplexMatrix& rho_in) {
    const ComplexMatrix& b = be.block;
    if (rho_in.shape() != b.shape()) throw DimensionMismatch("input state does not match the data register");
    if (!rho_in.is_hermitian(1e-10)) throw NotHermitian("input state is not Hermitian");
    if (std::abs(rho_in.trace() - Complex(1.0)) > 1e-8) throw InvalidArgument("input state must have unit trace");
    if (min_eigenvalue(rho_in) < -1e-10) throw InvalidArgument("input state is not positive semidefinite");
    const ComplexMatrix out = b * rho_in * b.adjoint();
    const double p = out.trace().real();
    if (p < 1e-14) throw PostSelectionFailed("post-selection success probability is below 1e-14");
    ComplexMatrix sigma = partial_trace(out, {1});
    sigma *= Complex(1.0 / p);
    return PurifierOutput{p, std::move(sigma)};
}

std::string to_netlist(const QuantumCircuit& c) {
    std::ostringstream os;
    os.precision(17);
    for (const Gate& g : c.gates()) {
        if (const auto* ry = std::get_if<RyGate>(&g)) {
            os << "RY " << ry->theta << " anc";
            if (c.ancilla_dim() > 2) os << '[' << ry->qubit << ']';
            os << '\n';
        } else if (const auto* cp = std::get_if<ControlledPermutation>(&g)) {
            os << "CPERM " << (cp->sign > 0 ? "+1" : "-1") << ' ' << cp->perm.to_cycle_notation() << " anc["
               << cp->control_level << ']';
            for (int k = 1; k <= c.copies(); ++k) os << ' ' << k;
            os << '\n';
        } else {
            os << "PREP anc " << std::get<AncillaUnitary>(g).label << '\n';
        }
    }
    return os.str();
}

}  // namespace purify
