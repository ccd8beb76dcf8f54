#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "dqlstm/ansatz.hpp"
#include "dqlstm/errors.hpp"

using namespace dqlstm;

namespace {

std::size_t count_cnots(const GateSequence& seq) {
    std::size_t n = 0;
    for (const auto& ins : seq) n += std::holds_alternative<Cnot>(ins);
    return n;
}

PlacedGate placed(const Instruction& ins) { return std::get<PlacedGate>(ins); }

}  // namespace

TEST(EnumerateSpace, ThirtySixUniqueSorted) {
    const auto space = enumerate_space(4, 2);
    ASSERT_EQ(space.size(), 36u);
    EXPECT_EQ(space.n_qubits, 4);
    EXPECT_EQ(space.n_layers, 2);
    std::set<CircuitConfig> unique(space.configs.begin(), space.configs.end());
    EXPECT_EQ(unique.size(), 36u);
    EXPECT_TRUE(std::is_sorted(space.configs.begin(), space.configs.end()));
}

TEST(EnumerateSpace, FirstAndLast) {
    const auto space = enumerate_space(4, 2);
    const CircuitConfig first{EncodingInit::None, Rotation::RX, Entanglement::Chain, Rotation::RX};
    const CircuitConfig last{EncodingInit::HadamardAll, Rotation::RZ, Entanglement::Ring, Rotation::RZ};
    EXPECT_EQ(space.configs.front(), first);
    EXPECT_EQ(space.configs.back(), last);
    EXPECT_EQ(to_string(first), "H0|RX|chain|RX");
}

TEST(EnumerateSpace, IndependentOfQubits) { EXPECT_EQ(enumerate_space(2, 1).size(), 36u); }

TEST(EnumerateSpace, Preconditions) {
    EXPECT_THROW(enumerate_space(1, 2), SizeError);
    EXPECT_THROW(enumerate_space(4, 0), ConfigError);
}

TEST(ConfigString, RoundTrip) {
    for (const auto& c : enumerate_space(3, 1).configs) EXPECT_EQ(parse_circuit_config(to_string(c)), c);
    EXPECT_EQ(to_string(CircuitConfig{EncodingInit::HadamardAll, Rotation::RZ, Entanglement::Ring, Rotation::RY}),
              "H+|RZ|ring|RY");
}

TEST(ConfigString, Malformed) {
    EXPECT_THROW(parse_circuit_config("H0|RY|chain"), ConfigError);
    EXPECT_THROW(parse_circuit_config("H1|RY|chain|RY"), ConfigError);
    EXPECT_THROW(parse_circuit_config("H0|RW|chain|RY"), ConfigError);
    EXPECT_THROW(parse_circuit_config("H0|RY|star|RY"), ConfigError);
}

TEST(Baselines, TableRows) {
    const auto b = baseline_configs();
    const std::pair<Rotation, Rotation> rows[6] = {{Rotation::RY, Rotation::RY}, {Rotation::RZ, Rotation::RY},
                                                   {Rotation::RZ, Rotation::RZ}, {Rotation::RY, Rotation::RZ},
                                                   {Rotation::RX, Rotation::RZ}, {Rotation::RX, Rotation::RY}};
    for (int i = 0; i < 6; ++i) {
        EXPECT_EQ(b[i].encoding_rot, rows[i].first) << "config " << i + 1;
        EXPECT_EQ(b[i].variational_rot, rows[i].second) << "config " << i + 1;
        EXPECT_EQ(b[i].encoding_init, EncodingInit::HadamardAll);
        EXPECT_EQ(b[i].entangle_pattern, Entanglement::Ring);
    }
}

TEST(BuildCircuit, TwoQubitChainExample) {
    const CircuitConfig c{EncodingInit::None, Rotation::RY, Entanglement::Chain, Rotation::RZ};
    const std::vector<double> v(2, 0.0), theta(2, 0.0);
    const auto seq = build_circuit(c, v, theta, 1);
    const GateSequence expected = {
        PlacedGate{make_gate(GateKind::RY, 0.0), 0}, PlacedGate{make_gate(GateKind::RY, 0.0), 1},
        Cnot{0, 1},
        PlacedGate{make_gate(GateKind::RZ, 0.0), 0}, PlacedGate{make_gate(GateKind::RZ, 0.0), 1},
    };
    EXPECT_EQ(seq, expected);
}

TEST(BuildCircuit, HadamardRingExample) {
    const CircuitConfig c{EncodingInit::HadamardAll, Rotation::RX, Entanglement::Ring, Rotation::RY};
    const std::vector<double> v(3, 0.5), theta(3, 0.1);
    const auto seq = build_circuit(c, v, theta, 1);
    for (int q = 0; q < 3; ++q) {
        EXPECT_EQ(placed(seq[q]).gate.kind, GateKind::H);
        EXPECT_EQ(placed(seq[q]).target, q);
    }
    std::vector<Cnot> cnots;
    for (const auto& ins : seq) {
        if (const auto* c2 = std::get_if<Cnot>(&ins)) cnots.push_back(*c2);
    }
    EXPECT_EQ(cnots, (std::vector<Cnot>{{0, 1}, {1, 2}, {2, 0}}));
}

TEST(BuildCircuit, EncodingIsArctan) {
    const CircuitConfig c{EncodingInit::None, Rotation::RX, Entanglement::Chain, Rotation::RY};
    const std::vector<double> v = {-2.0, 3.0}, theta(2, 0.0);
    const auto seq = build_circuit(c, v, theta, 1);
    EXPECT_DOUBLE_EQ(placed(seq[0]).gate.angle, std::atan(-2.0));
    EXPECT_DOUBLE_EQ(placed(seq[1]).gate.angle, std::atan(3.0));
}

TEST(BuildCircuit, ChainInstructionCount) {
    for (int n = 2; n <= 6; ++n) {
        for (int m = 1; m <= 3; ++m) {
            const CircuitConfig c{EncodingInit::None, Rotation::RZ, Entanglement::Chain, Rotation::RX};
            const auto seq = build_circuit(c, std::vector<double>(n, 0.3), std::vector<double>(n * m, 0.2), m);
            EXPECT_EQ(seq.size(), static_cast<std::size_t>(n + m * (n - 1) + m * n));
        }
    }
}

TEST(BuildCircuit, AllConfigsCompile) {
    for (int n = 2; n <= 6; ++n) {
        for (int m = 1; m <= 3; ++m) {
            for (const auto& c : enumerate_space(n, m).configs) {
                const auto seq = build_circuit(c, std::vector<double>(n, 0.1), std::vector<double>(n * m, 0.2), m);
                const std::size_t per_layer = c.entangle_pattern == Entanglement::Chain ? n - 1 : n;
                EXPECT_EQ(count_cnots(seq), per_layer * m);
                for (const auto& ins : seq) {
                    if (const auto* g = std::get_if<PlacedGate>(&ins)) {
                        EXPECT_LT(g->target, n);
                    }
                }
            }
        }
    }
}

TEST(BuildCircuit, Deterministic) {
    const auto c = enumerate_space(4, 2).configs[17];
    const std::vector<double> v = {0.1, -0.2, 0.3, 0.4}, theta = {1, 2, 3, 4, 5, 6, 7, 8};
    EXPECT_EQ(build_circuit(c, v, theta, 2), build_circuit(c, v, theta, 2));
}

TEST(BuildCircuit, ShapeErrors) {
    const auto c = enumerate_space(4, 2).configs[0];
    EXPECT_THROW(build_circuit(c, std::vector<double>(4, 0.0), std::vector<double>(7, 0.0), 2), ConfigError);
    EXPECT_THROW(build_circuit(c, std::vector<double>(4, 0.0), std::vector<double>(8, 0.0), 0), ConfigError);
}

TEST(EntanglingLayer, Patterns) {
    EXPECT_EQ(entangling_layer(Entanglement::Chain, 4), (std::vector<Cnot>{{0, 1}, {1, 2}, {2, 3}}));
    EXPECT_EQ(entangling_layer(Entanglement::Ring, 4), (std::vector<Cnot>{{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
}
