#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace dqlstm {

using Amplitude = std::complex<double>;

// Upper bound on simulated register width; 2^12 amplitudes.
inline constexpr int kMaxQubits = 12;

enum class GateKind { H, RX, RY, RZ };

// Single-qubit gate. Rotations follow R_a(theta) = exp(-i theta sigma_a / 2);
// the angle is ignored for H. `matrix` is row-major [m00, m01, m10, m11].
struct Gate1Q {
    GateKind kind = GateKind::H;
    double angle = 0.0;
    std::array<Amplitude, 4> matrix{};

    bool operator==(const Gate1Q&) const = default;
};

struct Cnot {
    int control = 0;
    int target = 1;

    bool operator==(const Cnot&) const = default;
};

Gate1Q make_gate(GateKind kind, double angle = 0.0);

// Dense pure state of n qubits. Qubit 0 is the most significant bit of the
// amplitude index, so |q0 q1 ... q_{n-1}> lives at index q0*2^{n-1} + ... .
class Statevector {
  public:
    explicit Statevector(int n_qubits);

    // Basis state |index>.
    static Statevector basis(int n_qubits, std::size_t index);
    static Statevector from_amplitudes(int n_qubits, std::vector<Amplitude> amplitudes);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    const Amplitude& operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm_squared() const;

    void apply(const Gate1Q& gate, int target);
    void apply(const Cnot& cnot);
    double expect_z(int qubit) const;

    // Bit mask selecting `qubit` in an amplitude index.
    std::size_t mask(int qubit) const { return std::size_t{1} << (n_qubits_ - 1 - qubit); }

  private:
    void check_qubit(int qubit) const;

    int n_qubits_;
    std::vector<Amplitude> amplitudes_;
};

Statevector new_zero_state(int n_qubits);
Statevector apply_1q(Statevector state, const Gate1Q& gate, int target);
Statevector apply_cnot(Statevector state, const Cnot& cnot);
double expect_z(const Statevector& state, int qubit);

}  // namespace dqlstm
