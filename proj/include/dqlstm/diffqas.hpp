#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dqlstm/ansatz.hpp"
#include "dqlstm/graddiff.hpp"
#include "dqlstm/params.hpp"
#include "dqlstm/qnn.hpp"

namespace dqlstm {

enum class Regime { NonShared, Shared, ReservoirNonShared, ReservoirShared };

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view text);
bool is_reservoir(Regime regime);
bool is_shared(Regime regime);

// Mixture of every candidate circuit in `space`:
//   f(v) = sum_j w_j f_j(v),  w = softmax(logits)
// With raw_weights the logits are used directly as w (unnormalized sum).
struct DiffQasBlock {
    SearchSpace space;
    Regime regime = Regime::NonShared;
    bool raw_weights = false;
    ParamId logits = 0;
    std::vector<ParamId> thetas;  // one per candidate, or one shared

    ParamId theta_for(std::size_t candidate) const {
        return thetas.size() == 1 ? thetas.front() : thetas.at(candidate);
    }
};

struct BlockOptions {
    std::string name = "block";
    bool raw_weights = false;
    // Starting angles of trainable regimes; reservoirs always draw uniform.
    InitScheme trainable_init = InitScheme::Uniform;
};

// Registers the block's logits and angle sets in `store`, drawing random
// angles from `rng`. Logits start at 0 (1/N each when raw_weights).
DiffQasBlock make_block(ParameterStore& store, const SearchSpace& space, Regime regime,
                        std::mt19937_64& rng, const BlockOptions& options = {});
DiffQasBlock make_block(ParameterStore& store, const SearchSpace& space, Regime regime,
                        std::uint64_t seed, const BlockOptions& options = {});

std::vector<double> mixture_weights(const DiffQasBlock& block, const ParameterStore& store);

// Direct evaluation without a tape.
std::vector<double> block_forward(const DiffQasBlock& block, const ParameterStore& store,
                                  std::span<const double> v);

// Parameters of this block that receive optimizer updates.
std::vector<ParamId> trainable_parameters(const DiffQasBlock& block, const ParameterStore& store);

NodeId record_block(Tape& tape, const DiffQasBlock& block, const ParameterStore& store, NodeId v);

struct WeightRow {
    std::string config;
    double weight = 0.0;
};
std::vector<WeightRow> structural_weights(const DiffQasBlock& block, const ParameterStore& store);

}  // namespace dqlstm
