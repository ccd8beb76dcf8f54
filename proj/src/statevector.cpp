#include "dqlstm/statevector.hpp"

#include <cmath>
#include <string>

#include "dqlstm/errors.hpp"

namespace dqlstm {

Gate1Q make_gate(GateKind kind, double angle) {
    if (!std::isfinite(angle)) {
        throw NumericError("gate angle must be finite");
    }
    Gate1Q g;
    g.kind = kind;
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (kind) {
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            g.angle = 0.0;
            g.matrix = {Amplitude{r, 0}, Amplitude{r, 0}, Amplitude{r, 0}, Amplitude{-r, 0}};
            break;
        }
        case GateKind::RX:
            g.angle = angle;
            g.matrix = {Amplitude{c, 0}, Amplitude{0, -s}, Amplitude{0, -s}, Amplitude{c, 0}};
            break;
        case GateKind::RY:
            g.angle = angle;
            g.matrix = {Amplitude{c, 0}, Amplitude{-s, 0}, Amplitude{s, 0}, Amplitude{c, 0}};
            break;
        case GateKind::RZ:
            g.angle = angle;
            g.matrix = {Amplitude{c, -s}, Amplitude{0, 0}, Amplitude{0, 0}, Amplitude{c, s}};
            break;
    }
    return g;
}

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw SizeError("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                        std::to_string(kMaxQubits) + "]");
    }
    amplitudes_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
    amplitudes_[0] = Amplitude{1.0, 0.0};
}

Statevector Statevector::basis(int n_qubits, std::size_t index) {
    Statevector s(n_qubits);
    if (index >= s.dim()) {
        throw IndexError("basis index " + std::to_string(index) + " out of range");
    }
    s.amplitudes_[0] = Amplitude{0.0, 0.0};
    s.amplitudes_[index] = Amplitude{1.0, 0.0};
    return s;
}

Statevector Statevector::from_amplitudes(int n_qubits, std::vector<Amplitude> amplitudes) {
    Statevector s(n_qubits);
    if (amplitudes.size() != s.dim()) {
        throw SizeError("expected " + std::to_string(s.dim()) + " amplitudes, got " +
                        std::to_string(amplitudes.size()));
    }
    s.amplitudes_ = std::move(amplitudes);
    return s;
}

double Statevector::norm_squared() const {
    double total = 0.0;
    for (const auto& a : amplitudes_) total += std::norm(a);
    return total;
}

void Statevector::check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= n_qubits_) {
        throw IndexError("qubit " + std::to_string(qubit) + " out of range for " +
                         std::to_string(n_qubits_) + "-qubit register");
    }
}

void Statevector::apply(const Gate1Q& gate, int target) {
    check_qubit(target);
    const std::size_t m = mask(target);
    const std::size_t n = amplitudes_.size();
    const auto& u = gate.matrix;
    if (gate.kind == GateKind::RZ) {
        for (std::size_t i = 0; i < n; ++i) {
            amplitudes_[i] *= (i & m) ? u[3] : u[0];
        }
        return;
    }
    // Visit each (bit=0, bit=1) pair once.
    for (std::size_t i = 0; i < n; ++i) {
        if (i & m) continue;
        const Amplitude a0 = amplitudes_[i];
        const Amplitude a1 = amplitudes_[i | m];
        amplitudes_[i] = u[0] * a0 + u[1] * a1;
        amplitudes_[i | m] = u[2] * a0 + u[3] * a1;
    }
}

void Statevector::apply(const Cnot& cnot) {
    check_qubit(cnot.control);
    check_qubit(cnot.target);
    if (cnot.control == cnot.target) {
        throw ConfigError("CNOT control and target must differ");
    }
    const std::size_t cm = mask(cnot.control);
    const std::size_t tm = mask(cnot.target);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & cm) && !(i & tm)) std::swap(amplitudes_[i], amplitudes_[i | tm]);
    }
}

double Statevector::expect_z(int qubit) const {
    check_qubit(qubit);
    const std::size_t m = mask(qubit);
    double total = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        const double p = std::norm(amplitudes_[i]);
        total += (i & m) ? -p : p;
    }
    return total;
}

Statevector new_zero_state(int n_qubits) { return Statevector(n_qubits); }

Statevector apply_1q(Statevector state, const Gate1Q& gate, int target) {
    state.apply(gate, target);
    return state;
}

Statevector apply_cnot(Statevector state, const Cnot& cnot) {
    state.apply(cnot);
    return state;
}

double expect_z(const Statevector& state, int qubit) { return state.expect_z(qubit); }

}  // namespace dqlstm
