#include "purify/channels.hpp"

#include "purify/errors.hpp"
#include "purify/symgroup.hpp"

#include <cmath>
#include <numeric>

namespace purify {

namespace {

void check_delta(double delta) {
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw InvalidArgument("noise parameter must lie in [0,1], got " + std::to_string(delta));
    }
}

Mat shift(int d) {
    Mat x = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k) x((k + 1) % d, k) = 1.0;
    return x;
}

Mat clock(int d) {
    Mat z = Mat::Zero(d, d);
    const double two_pi = 2.0 * std::acos(-1.0);
    for (int k = 0; k < d; ++k) z(k, k) = std::polar(1.0, two_pi * k / d);
    return z;
}

}  // namespace

std::string to_string(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::Depolarizing:
            return "depolarizing";
        case ChannelKind::Pauli:
            return "pauli";
        case ChannelKind::AmplitudeDamping:
            return "amplitude_damping";
        case ChannelKind::Custom:
            break;
    }
    return "custom";
}

NoiseChannel::NoiseChannel(std::vector<Mat> kraus, ChannelKind kind, std::optional<double> delta)
    : kraus_(std::move(kraus)), kind_(kind), delta_(delta) {
    if (kraus_.empty()) throw InvalidArgument("a channel needs at least one Kraus operator");
    const Eigen::Index d = kraus_.front().rows();
    if (d < 2) throw InvalidArgument("channel dimension must be >= 2");
    Mat sum = Mat::Zero(d, d);
    for (const Mat& k : kraus_) {
        if (k.rows() != d || k.cols() != d) throw DimensionMismatch("Kraus operators must be square and equal-sized");
        sum += k.adjoint() * k;
    }
    if ((sum - Mat::Identity(d, d)).norm() > 1e-10) {
        throw InvalidArgument("Kraus operators are not trace preserving");
    }
}

NoiseChannel identity_channel(int d) {
    if (d < 2) throw InvalidArgument("channel dimension must be >= 2");
    return NoiseChannel({Mat::Identity(d, d)}, ChannelKind::Custom, 0.0);
}

NoiseChannel depolarizing(int d, double delta) {
    if (d < 2) throw InvalidArgument("channel dimension must be >= 2");
    check_delta(delta);
    const Mat x = shift(d);
    const Mat z = clock(d);
    const double dd = static_cast<double>(d) * d;
    std::vector<Mat> kraus;
    Mat xa = Mat::Identity(d, d);
    for (int a = 0; a < d; ++a) {
        Mat op = xa;
        for (int b = 0; b < d; ++b) {
            const double w = (a == 0 && b == 0) ? 1.0 - delta + delta / dd : delta / dd;
            if (w > 0.0) kraus.push_back(std::sqrt(w) * op);
            op = op * z;
        }
        xa = x * xa;
    }
    return NoiseChannel(std::move(kraus), ChannelKind::Depolarizing, delta);
}

NoiseChannel pauli_preset(double delta, int d) {
    check_delta(delta);
    if (d != 2 && d != 4) throw InvalidArgument("Pauli preset is defined for d = 2 or 4");
    Mat i = Mat::Identity(2, 2);
    Mat x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    z << 1, 0, 0, -1;
    const double w[4] = {1.0 - 0.75 * delta, 0.1 * delta, 0.2 * delta, 0.45 * delta};
    const Mat* ops[4] = {&i, &x, &y, &z};
    std::vector<Mat> single;
    for (int k = 0; k < 4; ++k) {
        if (w[k] > 0.0) single.push_back(std::sqrt(w[k]) * *ops[k]);
    }
    if (d == 2) return NoiseChannel(std::move(single), ChannelKind::Pauli, delta);

    std::vector<Mat> pairs;
    const SubsystemShape one({2});
    for (const Mat& a : single) {
        for (const Mat& b : single) {
            pairs.push_back(kron(ComplexMatrix(one, a), ComplexMatrix(one, b)).entries());
        }
    }
    return NoiseChannel(std::move(pairs), ChannelKind::Pauli, delta);
}

NoiseChannel amplitude_damping(double delta) {
    check_delta(delta);
    Mat k0 = Mat::Zero(2, 2), k1 = Mat::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - delta);
    k1(0, 1) = std::sqrt(delta);
    std::vector<Mat> kraus{k0};
    if (delta > 0.0) kraus.push_back(k1);
    return NoiseChannel(std::move(kraus), ChannelKind::AmplitudeDamping, delta);
}

ComplexMatrix apply(const NoiseChannel& ch, const ComplexMatrix& m) {
    if (m.shape().count() != 1) throw DimensionMismatch("apply expects a single-system operator");
    return apply_on(ch, m, {1});
}

ComplexMatrix apply_tensor_power(const NoiseChannel& ch, int n, const ComplexMatrix& m) {
    if (m.shape().count() != n) {
        throw DimensionMismatch("operator has " + std::to_string(m.shape().count()) + " subsystems, expected " +
                                std::to_string(n));
    }
    SubsystemSet all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 1);
    return apply_on(ch, m, all);
}

ComplexMatrix apply_on(const NoiseChannel& ch, const ComplexMatrix& m, const SubsystemSet& labels) {
    for (int label : labels) {
        if (m.shape().dim(label) != ch.dim()) {
            throw DimensionMismatch("channel dimension does not match subsystem " + std::to_string(label));
        }
    }
    ComplexMatrix cur = m;
    for (int label : labels) {
        ComplexMatrix acc = ComplexMatrix::zero(m.shape());
        for (const Mat& k : ch.kraus()) acc += conjugate_local(k, cur, label);
        cur = std::move(acc);
    }
    return cur;
}

ChoiOperator choi(const NoiseChannel& ch) {
    const int d = ch.dim();
    const SubsystemShape one({d});
    return choi_of_map([&](const ComplexMatrix& e) { return apply(ch, e); }, one, one);
}

ChoiOperator choi_of_map(const LinearMap& map, const SubsystemShape& input, const SubsystemShape& output) {
    const Eigen::Index din = input.total_dim();
    const Eigen::Index dout = output.total_dim();
    Mat j = Mat::Zero(din * dout, din * dout);
    Mat e = Mat::Zero(din, din);
    for (Eigen::Index a = 0; a < din; ++a) {
        for (Eigen::Index b = 0; b < din; ++b) {
            e(a, b) = 1.0;
            ComplexMatrix image = map(ComplexMatrix(input, e));
            e(a, b) = 0.0;
            if (!(image.shape() == output)) throw DimensionMismatch("map output shape differs from the declared one");
            j.block(a * dout, b * dout, dout, dout) = image.entries();
        }
    }
    return ChoiOperator{ComplexMatrix(input.concat(output), std::move(j)), static_cast<int>(din),
                        static_cast<int>(dout)};
}

ComplexMatrix apply_choi(const ChoiOperator& j, const ComplexMatrix& rho) {
    if (rho.dim() != j.input_dim) throw DimensionMismatch("input state does not match the Choi input dimension");
    const Eigen::Index dout = j.output_dim;
    Mat out = Mat::Zero(dout, dout);
    // tr_in[J (ρ^T ⊗ I)] = Σ_ab ρ_ab J_{ab}
    for (Eigen::Index a = 0; a < j.input_dim; ++a) {
        for (Eigen::Index b = 0; b < j.input_dim; ++b) {
            out += rho(a, b) * j.matrix.entries().block(a * dout, b * dout, dout, dout);
        }
    }
    return ComplexMatrix(SubsystemShape({j.output_dim}), std::move(out));
}

MomentOperators moment_operators(const NoiseChannel& ch, int n) {
    if (n < 1) throw InvalidArgument("moment operators need n >= 1");
    const int d = ch.dim();
    double total = 1.0;
    for (int k = 0; k <= n; ++k) total *= d;
    if (total > 256.0) {
        throw BudgetExceeded("moment operators need d^(n+1) <= 256, got " + std::to_string(static_cast<long>(total)));
    }
    SubsystemSet first(static_cast<std::size_t>(n));
    std::iota(first.begin(), first.end(), 1);

    ComplexMatrix q = apply_on(ch, symmetric_projector(n + 1, d), first);
    q *= Complex(1.0 / static_cast<double>(sym_dim(n + 1, d)));

    ComplexMatrix rn = apply_tensor_power(ch, n, symmetric_projector(n, d));
    rn *= Complex(1.0 / static_cast<double>(sym_dim(n, d)));
    ComplexMatrix r = kron(rn, ComplexMatrix::identity(SubsystemShape({d})));
    return MomentOperators{std::move(q), std::move(r), n, d};
}

}  // namespace purify
