#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dqlstm/statevector.hpp"

namespace dqlstm {

enum class EncodingInit { None, HadamardAll };
enum class Rotation { RX, RY, RZ };
enum class Entanglement { Chain, Ring };

// One point of the architecture search space. Field order defines the
// lexicographic enumeration order.
struct CircuitConfig {
    EncodingInit encoding_init = EncodingInit::None;
    Rotation encoding_rot = Rotation::RY;
    Entanglement entangle_pattern = Entanglement::Chain;
    Rotation variational_rot = Rotation::RY;

    auto operator<=>(const CircuitConfig&) const = default;
};

// Canonical form "H0|RY|chain|RZ" / "H+|RX|ring|RY".
std::string to_string(const CircuitConfig& config);
CircuitConfig parse_circuit_config(std::string_view text);

GateKind gate_kind(Rotation rot);

struct SearchSpace {
    std::vector<CircuitConfig> configs;
    int n_qubits = 4;
    int n_layers = 2;

    std::size_t size() const { return configs.size(); }
};

SearchSpace enumerate_space(int n_qubits, int n_layers);

// Hand-designed baselines, index 0 is "Config 1". Encoding init and
// entanglement are fixed to HadamardAll / Ring.
std::array<CircuitConfig, 6> baseline_configs();

struct PlacedGate {
    Gate1Q gate;
    int target = 0;

    bool operator==(const PlacedGate&) const = default;
};

using Instruction = std::variant<PlacedGate, Cnot>;
using GateSequence = std::vector<Instruction>;

// Maps a classical feature to its encoding rotation angle.
inline double encoding_angle(double v) { return std::atan(v); }

// CNOT list of one entangling layer.
std::vector<Cnot> entangling_layer(Entanglement pattern, int n_qubits);

// Circuit from raw angles: `encoding_angles` has n_qubits entries,
// `variational_angles` is layer-major (n_layers x n_qubits). Parametric
// gates appear in the output in exactly that concatenated order.
GateSequence compile_circuit(const CircuitConfig& config, int n_qubits, int n_layers,
                             std::span<const double> encoding_angles,
                             std::span<const double> variational_angles);

// Circuit for input v (one feature per qubit, encoded as arctan(v_q)).
GateSequence build_circuit(const CircuitConfig& config, std::span<const double> v,
                           std::span<const double> theta, int n_layers);

Statevector run_circuit(int n_qubits, const GateSequence& sequence);
void apply_instruction(Statevector& state, const Instruction& instruction);

}  // namespace dqlstm
