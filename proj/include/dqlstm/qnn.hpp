#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "dqlstm/ansatz.hpp"
#include "dqlstm/params.hpp"

namespace dqlstm {

// Trainable angles of one candidate circuit, layer-major (n_layers x n_qubits).
struct QnnParams {
    int n_layers = 0;
    int n_qubits = 0;
    std::vector<double> angles;
    ParamId param_id = 0;

    double at(int layer, int qubit) const { return angles[layer * n_qubits + qubit]; }
};

enum class InitScheme { Uniform, Zeros };
// "uniform", "zeros".
std::string_view to_string(InitScheme scheme);
InitScheme parse_init_scheme(std::string_view text);

// Uniform draws i.i.d. angles from [-pi, pi).
std::vector<double> init_angles(std::mt19937_64& rng, InitScheme scheme, std::size_t count);
QnnParams init_params(std::uint64_t seed, InitScheme scheme, int n_layers, int n_qubits,
                      ParamId param_id = 0);

// <Z_q> for every qubit q.
std::vector<double> z_expectations(const Statevector& state);

// Circuit output for the concatenated angle vector [encoding (n), variational (n_layers*n)].
std::vector<double> circuit_expectations(const CircuitConfig& config, int n_qubits, int n_layers,
                                         std::span<const double> angles);

// f(v; theta) = (<Z_0>, ..., <Z_{n-1}>).
std::vector<double> qnn_forward(const CircuitConfig& config, int n_layers,
                                std::span<const double> theta, std::span<const double> v);
std::vector<double> qnn_forward(const CircuitConfig& config, const QnnParams& theta,
                                std::span<const double> v);

}  // namespace dqlstm
