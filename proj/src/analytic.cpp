#include "purify/analytic.hpp"

#include "purify/errors.hpp"
#include "purify/symgroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace purify {

namespace {

std::int64_t checked_power(int d, int n, std::int64_t limit, const char* what) {
    std::int64_t total = 1;
    for (int k = 0; k < n; ++k) {
        total *= d;
        if (total > limit) {
            throw BudgetExceeded(std::string(what) + ": " + std::to_string(d) + "^" + std::to_string(n) +
                                 " exceeds " + std::to_string(limit));
        }
    }
    return total;
}

ComplexMatrix normalized(const ComplexMatrix& m) { return m * Complex(1.0 / m.trace().real()); }

}  // namespace

EigenSpectrum::EigenSpectrum(std::vector<double> lambdas, double delta)
    : lambdas_(std::move(lambdas)), delta_(delta) {}

EigenSpectrum EigenSpectrum::depolarizing(int d, double delta) {
    if (d < 2) throw InvalidArgument("dimension must be >= 2");
    if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidArgument("noise parameter must lie in [0,1]");
    std::vector<double> l(static_cast<std::size_t>(d), delta / d);
    l[0] = 1.0 - (d - 1) * delta / d;
    return EigenSpectrum(std::move(l), delta);
}

EigenSpectrum EigenSpectrum::from_values(std::vector<double> lambdas) {
    if (lambdas.size() < 2) throw InvalidArgument("spectrum needs at least two eigenvalues");
    double sum = 0.0;
    for (double v : lambdas) {
        if (!(v >= 0.0)) throw InvalidArgument("spectrum entries must be nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InvalidArgument("spectrum must sum to 1");
    std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
    return EigenSpectrum(std::move(lambdas), std::numeric_limits<double>::quiet_NaN());
}

double EigenSpectrum::power_trace(int j) const {
    double s = 0.0;
    for (double v : lambdas_) s += std::pow(v, j);
    return s;
}

std::vector<PurificationPoint> recursion_pn_fn(const EigenSpectrum& spec, int n_max) {
    if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    std::vector<double> tr(static_cast<std::size_t>(n_max) + 1, 0.0);
    std::vector<double> l0(static_cast<std::size_t>(n_max) + 1, 1.0);
    p[0] = 1.0;
    for (int j = 1; j <= n_max; ++j) {
        tr[j] = spec.power_trace(j);
        l0[j] = l0[j - 1] * spec.lambda0();
    }
    std::vector<PurificationPoint> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        double ps = 0.0, fs = 0.0;
        for (int j = 1; j <= n; ++j) {
            ps += p[n - j] * tr[j];
            fs += p[n - j] * l0[j];
        }
        p[n] = ps / n;
        out.push_back({n, p[n], fs / (n * p[n])});
    }
    return out;
}

PurificationPoint golden_point(const EigenSpectrum& spec) {
    const double l0 = spec.lambda0();
    const double p2 = 0.5 * (1.0 + spec.power_trace(2));
    return {2, p2, (l0 + l0 * l0) / (2.0 * p2)};
}

ThreeCopyClosedForm three_copy_closed_form(double delta, int d) {
    if (d != 2) throw InvalidArgument("the three-copy closed form is a qubit formula (d = 2)");
    if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidArgument("noise parameter must lie in [0,1]");
    const double p = 1.0 - delta + 0.5 * delta * delta;
    const double dp = (2.0 * delta + delta * delta * delta) / (6.0 * p);
    return {p, dp, 1.0 - dp / 2.0};
}

PurificationPoint brute_force_pn_fn(const EigenSpectrum& spec, int n) {
    if (n < 1) throw InvalidArgument("n must be >= 1");
    const int d = spec.dim();
    const std::int64_t total = checked_power(d, n, 4096, "brute_force_pn_fn");
    const Mat pi = symmetric_projector(n, d).entries();

    Eigen::VectorXd diag = Eigen::VectorXd::Ones(total);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        std::int64_t rem = idx;
        for (int k = 0; k < n; ++k) {
            diag(idx) *= spec.lambdas()[static_cast<std::size_t>(rem % d)];
            rem /= d;
        }
    }
    double p = 0.0;
    for (std::int64_t j = 0; j < total; ++j) p += pi(j, j).real() * diag(j);

    // Rows whose first tensor factor is |0> occupy the leading d^{n-1} indices.
    const std::int64_t block = total / d;
    double num = 0.0;
    for (std::int64_t i = 0; i < block; ++i) {
        for (std::int64_t j = 0; j < total; ++j) num += std::norm(pi(i, j)) * diag(j);
    }
    return {n, p, num / p};
}

ChoiOperator symmetric_protocol_choi(int n, int d) {
    if (n < 1) throw InvalidArgument("n must be >= 1");
    checked_power(d, n + 1, 256, "symmetric_protocol_choi");
    const Mat pi = symmetric_projector(n, d).entries();
    const Eigen::Index din = pi.rows();
    const Eigen::Index rest = din / d;
    // tr_{2..n}[Π|i><j|Π] = M_i M_j† with M_i column i of Π reshaped to d × d^{n−1}.
    std::vector<Mat> m(static_cast<std::size_t>(din));
    for (Eigen::Index i = 0; i < din; ++i) {
        Mat mi(d, rest);
        for (Eigen::Index a = 0; a < d; ++a) mi.row(a) = pi.col(i).segment(a * rest, rest).transpose();
        m[static_cast<std::size_t>(i)] = std::move(mi);
    }
    Mat j = Mat::Zero(din * d, din * d);
    for (Eigen::Index a = 0; a < din; ++a) {
        for (Eigen::Index b = 0; b < din; ++b) {
            j.block(a * d, b * d, d, d) = m[static_cast<std::size_t>(a)] * m[static_cast<std::size_t>(b)].adjoint();
        }
    }
    return ChoiOperator{ComplexMatrix(SubsystemShape::uniform(d, n + 1), std::move(j)), static_cast<int>(din), d};
}

PurificationPoint evaluate_protocol(const NoiseChannel& ch, int n) {
    const int d = ch.dim();
    checked_power(d, n + 1, 256, "evaluate_protocol");
    const ChoiOperator j = symmetric_protocol_choi(n, d);
    const MomentOperators mo = moment_operators(ch, n);
    SubsystemSet inputs(static_cast<std::size_t>(n));
    std::iota(inputs.begin(), inputs.end(), 1);
    const double p = hilbert_schmidt(j.matrix, partial_transpose(mo.r, inputs)).real();
    const double fp = hilbert_schmidt(j.matrix, partial_transpose(mo.q, inputs)).real();
    return {n, p, fp / p};
}

SampleComplexityResult sample_complexity(double delta, int d, double f_goal, int cap) {
    const EigenSpectrum spec = EigenSpectrum::depolarizing(d, delta);
    const double l0 = spec.lambda0();
    if (!(f_goal > l0 && f_goal < 1.0)) {
        throw InvalidArgument("f_goal must lie strictly between the single-copy fidelity " + std::to_string(l0) +
                              " and 1");
    }
    // Scaled recursion q_n = p_n / λ0^n keeps large n away from underflow:
    // q_n = (1/n) Σ_j q_{n−j} (1 + (d−1)(λ1/λ0)^j),  f_n = Σ_j q_{n−j} / (n q_n).
    const double ratio = (delta / d) / l0;
    std::vector<double> q{1.0}, t{0.0};
    double rj = 1.0;
    for (int n = 1; n <= cap; ++n) {
        rj *= ratio;
        t.push_back(1.0 + (d - 1) * rj);
        double qs = 0.0, fs = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double prev = q[static_cast<std::size_t>(n - j)];
            qs += prev * t[static_cast<std::size_t>(j)];
            fs += prev;
        }
        const double qn = qs / n;
        q.push_back(qn);
        const double fn = fs / (n * qn);
        if (fn >= f_goal) {
            const double expected = n * std::exp(-std::log(qn) - n * std::log(l0));
            return {n, expected, fn};
        }
    }
    throw UnreachableGoal("fidelity " + std::to_string(f_goal) + " not reached within n <= " + std::to_string(cap));
}

RecursiveTrace recursive_protocol(const NoiseChannel& ch, int n, int depth) {
    Vec ideal = Vec::Zero(ch.dim());
    ideal(0) = 1.0;
    return recursive_protocol(ch, n, depth, ideal);
}

RecursiveTrace recursive_protocol(const NoiseChannel& ch, int n, int depth, const Vec& ideal) {
    const int d = ch.dim();
    if (n < 1) throw InvalidArgument("branching factor must be >= 1");
    if (depth < 0 || depth > 10) throw InvalidArgument("depth must lie in 0..10");
    if (ideal.size() != d) throw DimensionMismatch("ideal state dimension differs from the channel dimension");
    checked_power(d, n, 4096, "recursive_protocol");

    const SubsystemShape one({d});
    ComplexMatrix sigma = apply(ch, ComplexMatrix::outer(one, ideal.normalized()));

    const HermitianSpectrum spec = eig_hermitian(sigma);
    const Eigen::Index top = spec.eigenvalues.size() - 1;
    if (spec.eigenvalues(top) - spec.eigenvalues(top - 1) < 1e-12) {
        throw DegenerateSpectrum("top eigenvalue of the noisy input is degenerate; the reference state is ambiguous");
    }
    const Vec ref = spec.eigenvectors.col(top);

    RecursiveTrace out{n, depth, {}, {}, {}};
    auto fidelity = [&](const ComplexMatrix& s) { return (ref.adjoint() * s.entries() * ref)(0, 0).real(); };
    out.states.push_back(sigma);
    out.success_probs.push_back(1.0);
    out.fidelities.push_back(fidelity(sigma));

    SubsystemSet first{1};
    for (int level = 1; level <= depth; ++level) {
        const ComplexMatrix power = kron_power(sigma, n);
        Mat left = apply_symmetrizer_left(power.entries(), n, d);
        Mat both = apply_symmetrizer_left(left.adjoint(), n, d).adjoint();
        both = (both + both.adjoint()) / 2.0;
        const double prob = both.trace().real();
        if (prob < 1e-14) throw PostSelectionFailed("post-selection probability vanished at level " + std::to_string(level));
        sigma = normalized(partial_trace(ComplexMatrix(power.shape(), std::move(both)), first));
        out.states.push_back(sigma);
        out.success_probs.push_back(prob);
        out.fidelities.push_back(fidelity(sigma));
    }
    return out;
}

}  // namespace purify
