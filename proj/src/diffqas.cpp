#include "dqlstm/diffqas.hpp"

#include "dqlstm/errors.hpp"

namespace dqlstm {

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::NonShared: return "nonshared";
        case Regime::Shared: return "shared";
        case Regime::ReservoirNonShared: return "reservoir-nonshared";
        case Regime::ReservoirShared: return "reservoir-shared";
    }
    return "?";
}

Regime parse_regime(std::string_view text) {
    for (auto r : {Regime::NonShared, Regime::Shared, Regime::ReservoirNonShared,
                   Regime::ReservoirShared}) {
        if (text == to_string(r)) return r;
    }
    throw ConfigError("unknown regime '" + std::string(text) + "'");
}

bool is_reservoir(Regime regime) {
    return regime == Regime::ReservoirNonShared || regime == Regime::ReservoirShared;
}

bool is_shared(Regime regime) {
    return regime == Regime::Shared || regime == Regime::ReservoirShared;
}

DiffQasBlock make_block(ParameterStore& store, const SearchSpace& space, Regime regime,
                        std::mt19937_64& rng, const BlockOptions& options) {
    if (space.configs.empty()) throw ConfigError("empty search space");
    DiffQasBlock block;
    block.space = space;
    block.regime = regime;
    block.raw_weights = options.raw_weights;

    const std::size_t n = space.size();
    const double start = options.raw_weights ? 1.0 / static_cast<double>(n) : 0.0;
    block.logits = store.add(options.name + ".logits", std::vector<double>(n, start), true);

    const bool frozen = is_reservoir(regime);
    const InitScheme scheme = frozen ? InitScheme::Uniform : options.trainable_init;
    const std::size_t per_set = static_cast<std::size_t>(space.n_layers * space.n_qubits);
    const std::size_t n_sets = is_shared(regime) ? 1 : n;
    for (std::size_t j = 0; j < n_sets; ++j) {
        const std::string name = is_shared(regime)
                                     ? options.name + ".theta"
                                     : options.name + ".theta." + std::to_string(j);
        block.thetas.push_back(store.add(name, init_angles(rng, scheme, per_set), !frozen));
    }
    return block;
}

DiffQasBlock make_block(ParameterStore& store, const SearchSpace& space, Regime regime,
                        std::uint64_t seed, const BlockOptions& options) {
    std::mt19937_64 rng(seed);
    return make_block(store, space, regime, rng, options);
}

std::vector<double> mixture_weights(const DiffQasBlock& block, const ParameterStore& store) {
    Tape tape;
    const NodeId logits = tape.parameter(store, block.logits);
    return block.raw_weights ? tape.value(logits) : tape.value(tape.softmax(logits));
}

std::vector<double> block_forward(const DiffQasBlock& block, const ParameterStore& store,
                                  std::span<const double> v) {
    if (v.size() != static_cast<std::size_t>(block.space.n_qubits)) {
        throw ConfigError("block input has " + std::to_string(v.size()) + " entries, expected " +
                          std::to_string(block.space.n_qubits));
    }
    const auto w = mixture_weights(block, store);
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t j = 0; j < block.space.size(); ++j) {
        const auto f = qnn_forward(block.space.configs[j], block.space.n_layers,
                                   store.values(block.theta_for(j)), v);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += w[j] * f[i];
    }
    return out;
}

std::vector<ParamId> trainable_parameters(const DiffQasBlock& block, const ParameterStore& store) {
    std::vector<ParamId> ids;
    if (store.trainable(block.logits)) ids.push_back(block.logits);
    for (ParamId id : block.thetas) {
        if (store.trainable(id)) ids.push_back(id);
    }
    return ids;
}

NodeId record_block(Tape& tape, const DiffQasBlock& block, const ParameterStore& store, NodeId v) {
    const NodeId logits = tape.parameter(store, block.logits);
    const NodeId weights = block.raw_weights ? logits : tape.softmax(logits);
    std::vector<NodeId> outputs;
    outputs.reserve(block.space.size());
    for (std::size_t j = 0; j < block.space.size(); ++j) {
        const NodeId theta = tape.parameter(store, block.theta_for(j));
        outputs.push_back(tape.quantum(block.space.configs[j], block.space.n_layers, theta, v));
    }
    return tape.mix(weights, outputs);
}

std::vector<WeightRow> structural_weights(const DiffQasBlock& block, const ParameterStore& store) {
    const auto w = mixture_weights(block, store);
    std::vector<WeightRow> rows;
    for (std::size_t j = 0; j < block.space.size(); ++j) {
        rows.push_back({to_string(block.space.configs[j]), w[j]});
    }
    return rows;
}

}  // namespace dqlstm
