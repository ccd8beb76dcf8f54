#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "dqlstm/errors.hpp"
#include "dqlstm/statevector.hpp"

using namespace dqlstm;

namespace {

constexpr double kTol = 1e-12;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void expect_amp(const Amplitude& a, double re, double im = 0.0) {
    EXPECT_NEAR(a.real(), re, kTol);
    EXPECT_NEAR(a.imag(), im, kTol);
}

void expect_unitary(const Gate1Q& g) {
    const auto& m = g.matrix;
    // M^dagger M
    const Amplitude a = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
    const Amplitude b = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    const Amplitude d = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
    EXPECT_NEAR(std::abs(a - 1.0), 0.0, kTol);
    EXPECT_NEAR(std::abs(b), 0.0, kTol);
    EXPECT_NEAR(std::abs(d - 1.0), 0.0, kTol);
}

}  // namespace

TEST(ZeroState, OneQubit) {
    const auto s = new_zero_state(1);
    ASSERT_EQ(s.dim(), 2u);
    expect_amp(s[0], 1.0);
    expect_amp(s[1], 0.0);
}

TEST(ZeroState, TwoQubits) {
    const auto s = new_zero_state(2);
    ASSERT_EQ(s.dim(), 4u);
    expect_amp(s[0], 1.0);
    for (std::size_t i = 1; i < 4; ++i) expect_amp(s[i], 0.0);
}

TEST(ZeroState, FourQubitsNormalised) {
    const auto s = new_zero_state(4);
    EXPECT_EQ(s.dim(), 16u);
    EXPECT_DOUBLE_EQ(s.norm_squared(), 1.0);
}

TEST(ZeroState, RangeChecked) {
    EXPECT_THROW(new_zero_state(0), SizeError);
    EXPECT_THROW(new_zero_state(kMaxQubits + 1), SizeError);
    EXPECT_NO_THROW(new_zero_state(kMaxQubits));
}

TEST(MakeGate, RyPi) {
    const auto g = make_gate(GateKind::RY, std::numbers::pi);
    expect_amp(g.matrix[0], 0.0);
    expect_amp(g.matrix[1], -1.0);
    expect_amp(g.matrix[2], 1.0);
    expect_amp(g.matrix[3], 0.0);
}

TEST(MakeGate, RzZeroIsIdentity) {
    const auto g = make_gate(GateKind::RZ, 0.0);
    expect_amp(g.matrix[0], 1.0);
    expect_amp(g.matrix[1], 0.0);
    expect_amp(g.matrix[2], 0.0);
    expect_amp(g.matrix[3], 1.0);
}

TEST(MakeGate, Hadamard) {
    const auto g = make_gate(GateKind::H);
    expect_amp(g.matrix[0], kInvSqrt2);
    expect_amp(g.matrix[1], kInvSqrt2);
    expect_amp(g.matrix[2], kInvSqrt2);
    expect_amp(g.matrix[3], -kInvSqrt2);
}

TEST(MakeGate, HalfAngleConvention) {
    const double t = 0.7;
    const auto rx = make_gate(GateKind::RX, t);
    expect_amp(rx.matrix[0], std::cos(t / 2));
    expect_amp(rx.matrix[1], 0.0, -std::sin(t / 2));
    const auto rz = make_gate(GateKind::RZ, t);
    expect_amp(rz.matrix[0], std::cos(t / 2), -std::sin(t / 2));
    expect_amp(rz.matrix[3], std::cos(t / 2), std::sin(t / 2));
}

TEST(MakeGate, NonFiniteAngleRejected) {
    EXPECT_THROW(make_gate(GateKind::RX, std::numeric_limits<double>::quiet_NaN()), NumericError);
    EXPECT_THROW(make_gate(GateKind::RZ, std::numeric_limits<double>::infinity()), NumericError);
}

TEST(MakeGate, AllUnitary) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    expect_unitary(make_gate(GateKind::H));
    for (int i = 0; i < 50; ++i) {
        for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::RZ}) expect_unitary(make_gate(k, angle(rng)));
    }
}

TEST(Apply1q, RyPiFlips) {
    const auto s = apply_1q(new_zero_state(1), make_gate(GateKind::RY, std::numbers::pi), 0);
    expect_amp(s[0], 0.0);
    expect_amp(s[1], 1.0);
}

TEST(Apply1q, HadamardOnZero) {
    const auto s = apply_1q(new_zero_state(1), make_gate(GateKind::H), 0);
    expect_amp(s[0], kInvSqrt2);
    expect_amp(s[1], kInvSqrt2);
}

TEST(Apply1q, RxHalfPiOnSecondQubit) {
    const auto s = apply_1q(new_zero_state(2), make_gate(GateKind::RX, std::numbers::pi / 2), 1);
    EXPECT_NEAR(s.norm_squared(), 1.0, kTol);
    EXPECT_NEAR(expect_z(s, 1), 0.0, kTol);
    EXPECT_NEAR(expect_z(s, 0), 1.0, kTol);
}

TEST(Apply1q, TargetChecked) {
    Statevector s(2);
    EXPECT_THROW(s.apply(make_gate(GateKind::H), 2), IndexError);
    EXPECT_THROW(s.apply(make_gate(GateKind::H), -1), IndexError);
}

TEST(ApplyCnot, TruthTable) {
    // |10> -> |11>
    const auto s = apply_cnot(Statevector::basis(2, 0b10), Cnot{0, 1});
    expect_amp(s[0b11], 1.0);
    expect_amp(s[0b10], 0.0);
    // control unset
    const auto z = apply_cnot(new_zero_state(2), Cnot{0, 1});
    expect_amp(z[0], 1.0);
}

TEST(ApplyCnot, BellState) {
    auto s = apply_1q(new_zero_state(2), make_gate(GateKind::H), 0);
    s = apply_cnot(s, Cnot{0, 1});
    expect_amp(s[0b00], kInvSqrt2);
    expect_amp(s[0b01], 0.0);
    expect_amp(s[0b10], 0.0);
    expect_amp(s[0b11], kInvSqrt2);
}

TEST(ApplyCnot, ReversedDirection) {
    const auto s = apply_cnot(Statevector::basis(3, 0b001), Cnot{2, 0});
    expect_amp(s[0b101], 1.0);
}

TEST(ApplyCnot, InvalidIndices) {
    Statevector s(3);
    EXPECT_THROW(s.apply(Cnot{1, 1}), ConfigError);
    EXPECT_THROW(s.apply(Cnot{0, 3}), IndexError);
}

TEST(ExpectZ, Examples) {
    EXPECT_DOUBLE_EQ(expect_z(new_zero_state(1), 0), 1.0);
    EXPECT_NEAR(expect_z(apply_1q(new_zero_state(1), make_gate(GateKind::H), 0), 0), 0.0, kTol);
    const auto s = apply_1q(new_zero_state(1), make_gate(GateKind::RY, 1.234), 0);
    EXPECT_NEAR(expect_z(s, 0), 0.33046510807172985, kTol);
    // cross-check from amplitudes
    EXPECT_NEAR(std::norm(s[0]) - std::norm(s[1]), std::cos(1.234), kTol);
}

TEST(ExpectZ, BitOrder) {
    const auto s = Statevector::basis(2, 0b10);  // |1> (x) |0>
    EXPECT_DOUBLE_EQ(expect_z(s, 0), -1.0);
    EXPECT_DOUBLE_EQ(expect_z(s, 1), 1.0);
    EXPECT_EQ(s.mask(0), 0b10u);
}

TEST(ExpectZ, IndexChecked) { EXPECT_THROW(expect_z(new_zero_state(2), 2), IndexError); }

TEST(Properties, RyOracle) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    for (int i = 0; i < 100; ++i) {
        const double t = angle(rng);
        EXPECT_NEAR(expect_z(apply_1q(new_zero_state(1), make_gate(GateKind::RY, t), 0), 0), std::cos(t), kTol);
    }
}

TEST(Properties, NormPreservedRandomCircuits) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (int n = 1; n <= 6; ++n) {
        std::uniform_int_distribution<int> qubit(0, n - 1);
        Statevector s(n);
        for (int g = 0; g < 50; ++g) {
            const int kind = static_cast<int>(rng() % 5);
            if (kind == 4 && n > 1) {
                const int c = qubit(rng);
                int t = qubit(rng);
                if (t == c) t = (c + 1) % n;
                s.apply(Cnot{c, t});
            } else {
                s.apply(make_gate(static_cast<GateKind>(kind % 4), angle(rng)), qubit(rng));
            }
        }
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10) << n << " qubits";
        for (int q = 0; q < n; ++q) {
            EXPECT_LE(std::abs(s.expect_z(q)), 1.0 + 1e-12);
        }
    }
}

TEST(FromAmplitudes, SizeMismatch) {
    EXPECT_THROW(Statevector::from_amplitudes(2, std::vector<Amplitude>(3)), SizeError);
    EXPECT_THROW(Statevector::basis(2, 4), IndexError);
}
