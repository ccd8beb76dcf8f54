#include "dqlstm/qnn.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dqlstm/errors.hpp"

namespace dqlstm {

std::string_view to_string(InitScheme scheme) {
    return scheme == InitScheme::Uniform ? "uniform" : "zeros";
}

InitScheme parse_init_scheme(std::string_view text) {
    if (text == "uniform") return InitScheme::Uniform;
    if (text == "zeros") return InitScheme::Zeros;
    throw ConfigError("unknown init scheme '" + std::string(text) + "'");
}

std::vector<double> init_angles(std::mt19937_64& rng, InitScheme scheme, std::size_t count) {
    std::vector<double> out(count, 0.0);
    if (scheme == InitScheme::Uniform) {
        std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
        for (auto& a : out) a = dist(rng);
    }
    return out;
}

QnnParams init_params(std::uint64_t seed, InitScheme scheme, int n_layers, int n_qubits,
                      ParamId param_id) {
    if (n_layers < 1 || n_qubits < 1) throw ConfigError("QNN needs positive layers and qubits");
    std::mt19937_64 rng(seed);
    QnnParams p;
    p.n_layers = n_layers;
    p.n_qubits = n_qubits;
    p.angles = init_angles(rng, scheme, static_cast<std::size_t>(n_layers * n_qubits));
    p.param_id = param_id;
    return p;
}

std::vector<double> z_expectations(const Statevector& state) {
    // One pass over the amplitudes instead of n calls to expect_z.
    const int n = state.n_qubits();
    std::vector<double> out(n, 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        for (int q = 0; q < n; ++q) {
            out[q] += (i & state.mask(q)) ? -p : p;
        }
    }
    return out;
}

std::vector<double> circuit_expectations(const CircuitConfig& config, int n_qubits, int n_layers,
                                         std::span<const double> angles) {
    if (angles.size() != static_cast<std::size_t>((n_layers + 1) * n_qubits)) {
        throw ConfigError("angle vector has wrong length");
    }
    const auto seq = compile_circuit(config, n_qubits, n_layers, angles.first(n_qubits),
                                     angles.subspan(n_qubits));
    return z_expectations(run_circuit(n_qubits, seq));
}

std::vector<double> qnn_forward(const CircuitConfig& config, int n_layers,
                                std::span<const double> theta, std::span<const double> v) {
    return z_expectations(run_circuit(static_cast<int>(v.size()),
                                      build_circuit(config, v, theta, n_layers)));
}

std::vector<double> qnn_forward(const CircuitConfig& config, const QnnParams& theta,
                                std::span<const double> v) {
    if (theta.n_qubits != static_cast<int>(v.size())) {
        throw ConfigError("input length " + std::to_string(v.size()) + " does not match " +
                          std::to_string(theta.n_qubits) + " qubits");
    }
    return qnn_forward(config, theta.n_layers, theta.angles, v);
}

}  // namespace dqlstm
