#include "dqlstm/ansatz.hpp"

#include <string>

#include "dqlstm/errors.hpp"

namespace dqlstm {

namespace {

std::string_view rotation_name(Rotation r) {
    switch (r) {
        case Rotation::RX: return "RX";
        case Rotation::RY: return "RY";
        case Rotation::RZ: return "RZ";
    }
    return "?";
}

Rotation parse_rotation(std::string_view s) {
    if (s == "RX") return Rotation::RX;
    if (s == "RY") return Rotation::RY;
    if (s == "RZ") return Rotation::RZ;
    throw ConfigError("unknown rotation '" + std::string(s) + "'");
}

}  // namespace

std::string to_string(const CircuitConfig& config) {
    std::string out = config.encoding_init == EncodingInit::HadamardAll ? "H+" : "H0";
    out += '|';
    out += rotation_name(config.encoding_rot);
    out += '|';
    out += config.entangle_pattern == Entanglement::Ring ? "ring" : "chain";
    out += '|';
    out += rotation_name(config.variational_rot);
    return out;
}

CircuitConfig parse_circuit_config(std::string_view text) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto bar = text.find('|', start);
        fields.push_back(text.substr(start, bar == std::string_view::npos ? bar : bar - start));
        if (bar == std::string_view::npos) break;
        start = bar + 1;
    }
    if (fields.size() != 4) {
        throw ConfigError("circuit config '" + std::string(text) + "' must have 4 fields");
    }
    CircuitConfig c;
    if (fields[0] == "H+") {
        c.encoding_init = EncodingInit::HadamardAll;
    } else if (fields[0] == "H0") {
        c.encoding_init = EncodingInit::None;
    } else {
        throw ConfigError("unknown encoding init '" + std::string(fields[0]) + "'");
    }
    c.encoding_rot = parse_rotation(fields[1]);
    if (fields[2] == "chain") {
        c.entangle_pattern = Entanglement::Chain;
    } else if (fields[2] == "ring") {
        c.entangle_pattern = Entanglement::Ring;
    } else {
        throw ConfigError("unknown entanglement '" + std::string(fields[2]) + "'");
    }
    c.variational_rot = parse_rotation(fields[3]);
    return c;
}

GateKind gate_kind(Rotation rot) {
    switch (rot) {
        case Rotation::RX: return GateKind::RX;
        case Rotation::RY: return GateKind::RY;
        case Rotation::RZ: return GateKind::RZ;
    }
    return GateKind::RY;
}

SearchSpace enumerate_space(int n_qubits, int n_layers) {
    if (n_qubits < 2 || n_qubits > kMaxQubits) {
        throw SizeError("search space needs 2.." + std::to_string(kMaxQubits) + " qubits");
    }
    if (n_layers < 1) throw ConfigError("search space needs at least one layer");

    SearchSpace space;
    space.n_qubits = n_qubits;
    space.n_layers = n_layers;
    constexpr Rotation rotations[] = {Rotation::RX, Rotation::RY, Rotation::RZ};
    for (auto init : {EncodingInit::None, EncodingInit::HadamardAll})
        for (auto enc : rotations)
            for (auto ent : {Entanglement::Chain, Entanglement::Ring})
                for (auto var : rotations) space.configs.push_back({init, enc, ent, var});
    return space;
}

std::array<CircuitConfig, 6> baseline_configs() {
    constexpr auto H = EncodingInit::HadamardAll;
    constexpr auto ring = Entanglement::Ring;
    return {{
        {H, Rotation::RY, ring, Rotation::RY},
        {H, Rotation::RZ, ring, Rotation::RY},
        {H, Rotation::RZ, ring, Rotation::RZ},
        {H, Rotation::RY, ring, Rotation::RZ},
        {H, Rotation::RX, ring, Rotation::RZ},
        {H, Rotation::RX, ring, Rotation::RY},
    }};
}

std::vector<Cnot> entangling_layer(Entanglement pattern, int n_qubits) {
    std::vector<Cnot> out;
    for (int q = 0; q + 1 < n_qubits; ++q) out.push_back({q, q + 1});
    // A 2-qubit ring would repeat CNOT(1,0) after CNOT(0,1); still a valid closure.
    if (pattern == Entanglement::Ring) out.push_back({n_qubits - 1, 0});
    return out;
}

GateSequence compile_circuit(const CircuitConfig& config, int n_qubits, int n_layers,
                             std::span<const double> encoding_angles,
                             std::span<const double> variational_angles) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw SizeError("qubit count " + std::to_string(n_qubits) + " unsupported");
    }
    if (n_layers < 1) throw ConfigError("circuit needs at least one variational layer");
    if (encoding_angles.size() != static_cast<std::size_t>(n_qubits)) {
        throw ConfigError("expected " + std::to_string(n_qubits) + " encoding angles, got " +
                          std::to_string(encoding_angles.size()));
    }
    if (variational_angles.size() != static_cast<std::size_t>(n_layers * n_qubits)) {
        throw ConfigError("expected " + std::to_string(n_layers * n_qubits) +
                          " variational angles, got " + std::to_string(variational_angles.size()));
    }
    if (n_qubits < 2 && config.entangle_pattern == Entanglement::Ring) {
        // Ring on one wire would be CNOT(0,0).
        throw ConfigError("ring entanglement needs at least two qubits");
    }

    GateSequence seq;
    seq.reserve(static_cast<std::size_t>(2 * n_qubits + n_layers * (2 * n_qubits + 1)));
    if (config.encoding_init == EncodingInit::HadamardAll) {
        const Gate1Q h = make_gate(GateKind::H);
        for (int q = 0; q < n_qubits; ++q) seq.emplace_back(PlacedGate{h, q});
    }
    const GateKind enc = gate_kind(config.encoding_rot);
    for (int q = 0; q < n_qubits; ++q) {
        seq.emplace_back(PlacedGate{make_gate(enc, encoding_angles[q]), q});
    }
    const GateKind var = gate_kind(config.variational_rot);
    const auto cnots = entangling_layer(config.entangle_pattern, n_qubits);
    for (int l = 0; l < n_layers; ++l) {
        for (const auto& c : cnots) seq.emplace_back(c);
        for (int q = 0; q < n_qubits; ++q) {
            seq.emplace_back(PlacedGate{make_gate(var, variational_angles[l * n_qubits + q]), q});
        }
    }
    return seq;
}

GateSequence build_circuit(const CircuitConfig& config, std::span<const double> v,
                           std::span<const double> theta, int n_layers) {
    std::vector<double> enc(v.size());
    for (std::size_t q = 0; q < v.size(); ++q) {
        if (!std::isfinite(v[q])) throw NumericError("circuit input must be finite");
        enc[q] = encoding_angle(v[q]);
    }
    return compile_circuit(config, static_cast<int>(v.size()), n_layers, enc, theta);
}

void apply_instruction(Statevector& state, const Instruction& instruction) {
    if (const auto* g = std::get_if<PlacedGate>(&instruction)) {
        state.apply(g->gate, g->target);
    } else {
        state.apply(std::get<Cnot>(instruction));
    }
}

Statevector run_circuit(int n_qubits, const GateSequence& sequence) {
    Statevector state(n_qubits);
    for (const auto& ins : sequence) apply_instruction(state, ins);
    return state;
}

}  // namespace dqlstm
