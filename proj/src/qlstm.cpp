#include "dqlstm/qlstm.hpp"

#include <cmath>
#include <random>

#include "dqlstm/errors.hpp"

namespace dqlstm {

std::string_view to_string(GateRole role) {
    switch (role) {
        case GateRole::Forget: return "forget";
        case GateRole::Input: return "input";
        case GateRole::Candidate: return "candidate";
        case GateRole::Output: return "output";
    }
    return "?";
}

ModelMode ModelMode::baseline_config(int index) {
    if (index < 1 || index > 6) {
        throw ConfigError("baseline index must be 1..6, got " + std::to_string(index));
    }
    return {std::nullopt, index};
}

std::string to_string(const ModelMode& mode) {
    if (mode.is_baseline()) return "config" + std::to_string(mode.baseline);
    return std::string(to_string(*mode.regime));
}

ModelMode parse_mode(std::string_view text) {
    if (text.size() == 7 && text.substr(0, 6) == "config" && text[6] >= '1' && text[6] <= '6') {
        return ModelMode::baseline_config(text[6] - '0');
    }
    return ModelMode::diffqas(parse_regime(text));
}

namespace {

AffineMap make_affine(ParameterStore& store, const std::string& name, int out, int in,
                      bool identity) {
    std::vector<double> w(static_cast<std::size_t>(out * in), 0.0);
    if (identity) {
        for (int r = 0; r < out && r < in; ++r) w[r * in + r] = 1.0;
    }
    AffineMap map;
    map.out = out;
    map.in = in;
    map.weight = store.add(name + ".weight", std::move(w), true);
    map.bias = store.add(name + ".bias", std::vector<double>(out, 0.0), true);
    return map;
}

NodeId record_affine(Tape& tape, const AffineMap& map, const ParameterStore& store, NodeId x) {
    return tape.affine(tape.parameter(store, map.weight), tape.parameter(store, map.bias), x);
}

void check_finite(const Tape& tape, NodeId id, std::string_view what) {
    for (double v : tape.value(id)) {
        if (!std::isfinite(v)) {
            throw NumericError("non-finite value in " + std::string(what) + " gate");
        }
    }
}

}  // namespace

QlstmModel make_model(const ModelOptions& options, std::uint64_t seed) {
    if (options.hidden < 1) throw ConfigError("hidden size must be positive");
    if (options.n_layers < 1) throw ConfigError("need at least one variational layer");

    QlstmModel model;
    model.options = options;
    model.seed = seed;
    auto& cell = model.cell;
    cell.hidden = options.hidden;
    cell.input_size = 1;
    cell.n_qubits = options.hidden + 1;
    cell.n_layers = options.n_layers;
    if (cell.n_qubits > kMaxQubits) throw SizeError("hidden size too large for the simulator");

    std::mt19937_64 rng(seed);
    const SearchSpace space = enumerate_space(cell.n_qubits, cell.n_layers);
    for (std::size_t k = 0; k < kGateRoles.size(); ++k) {
        const std::string name(to_string(kGateRoles[k]));
        if (options.mode.is_baseline()) {
            FixedQnnBlock fixed;
            fixed.config = baseline_configs()[options.mode.baseline - 1];
            fixed.n_layers = cell.n_layers;
            fixed.theta = model.params.add(
                name + ".theta",
                init_angles(rng, options.trainable_init,
                            static_cast<std::size_t>(cell.n_layers * cell.n_qubits)),
                true);
            cell.gates[k] = fixed;
        } else {
            BlockOptions bo;
            bo.name = name;
            bo.raw_weights = options.raw_weights;
            bo.trainable_init = options.trainable_init;
            cell.gates[k] = make_block(model.params, space, *options.mode.regime, rng, bo);
        }
    }
    for (std::size_t k = 0; k < kGateRoles.size(); ++k) {
        cell.projections[k] = make_affine(model.params, std::string(to_string(kGateRoles[k])) + ".proj",
                                          cell.hidden, cell.n_qubits, true);
    }
    cell.head = make_affine(model.params, "head", 1, cell.hidden, false);
    return model;
}

NodeId record_gate_block(Tape& tape, const GateBlock& block, const ParameterStore& store, NodeId v) {
    if (const auto* fixed = std::get_if<FixedQnnBlock>(&block)) {
        return tape.quantum(fixed->config, fixed->n_layers, tape.parameter(store, fixed->theta), v);
    }
    return record_block(tape, std::get<DiffQasBlock>(block), store, v);
}

TapeCellState record_initial_state(Tape& tape, const QlstmModel& model) {
    const auto h = static_cast<std::size_t>(model.cell.hidden);
    return {tape.input(std::vector<double>(h, 0.0)), tape.input(std::vector<double>(h, 0.0))};
}

TapeCellState record_cell_step(Tape& tape, const QlstmModel& model, NodeId x, TapeCellState prev) {
    const auto& cell = model.cell;
    const auto& store = model.params;
    if (tape.value(prev.h).size() != static_cast<std::size_t>(cell.hidden) ||
        tape.value(prev.c).size() != static_cast<std::size_t>(cell.hidden)) {
        throw ConfigError("previous cell state has wrong size");
    }
    const NodeId parts[] = {prev.h, x};
    const NodeId v = tape.concat(parts);

    auto gate = [&](GateRole role, bool use_tanh) {
        const auto k = static_cast<std::size_t>(role);
        const NodeId q = record_gate_block(tape, cell.gates[k], store, v);
        const NodeId pre = record_affine(tape, cell.projections[k], store, q);
        const NodeId out = use_tanh ? tape.tanh(pre) : tape.sigmoid(pre);
        check_finite(tape, out, to_string(role));
        return out;
    };

    const NodeId f = gate(GateRole::Forget, false);
    const NodeId i = gate(GateRole::Input, false);
    const NodeId g = gate(GateRole::Candidate, true);
    const NodeId c = tape.add(tape.mul(f, prev.c), tape.mul(i, g));
    check_finite(tape, c, "cell");
    const NodeId o = gate(GateRole::Output, false);
    const NodeId h = tape.mul(o, tape.tanh(c));
    return {h, c};
}

NodeId record_unroll(Tape& tape, const QlstmModel& model, std::span<const double> window) {
    if (window.empty()) throw ConfigError("window must not be empty");
    TapeCellState state = record_initial_state(tape, model);
    for (double x : window) {
        state = record_cell_step(tape, model, tape.input({x}), state);
    }
    return record_affine(tape, model.cell.head, model.params, state.h);
}

CellState cell_step(const QlstmModel& model, double x, const CellState& prev) {
    Tape tape;
    TapeCellState in{tape.input(prev.h), tape.input(prev.c)};
    const auto out = record_cell_step(tape, model, tape.input({x}), in);
    return {tape.value(out.h), tape.value(out.c)};
}

double unroll(const QlstmModel& model, std::span<const double> window) {
    Tape tape;
    return tape.value(record_unroll(tape, model, window))[0];
}

std::vector<ParamId> quantum_parameters(const QlstmModel& model) {
    std::vector<ParamId> ids;
    for (const auto& block : model.cell.gates) {
        if (const auto* fixed = std::get_if<FixedQnnBlock>(&block)) {
            ids.push_back(fixed->theta);
        } else {
            const auto& b = std::get<DiffQasBlock>(block);
            ids.insert(ids.end(), b.thetas.begin(), b.thetas.end());
        }
    }
    return ids;
}

std::vector<ParamId> trainable_parameters(const QlstmModel& model) {
    std::vector<ParamId> ids;
    for (const auto& block : model.cell.gates) {
        if (const auto* fixed = std::get_if<FixedQnnBlock>(&block)) {
            ids.push_back(fixed->theta);
        } else {
            const auto part = trainable_parameters(std::get<DiffQasBlock>(block), model.params);
            ids.insert(ids.end(), part.begin(), part.end());
        }
    }
    for (const auto& p : model.cell.projections) {
        ids.push_back(p.weight);
        ids.push_back(p.bias);
    }
    ids.push_back(model.cell.head.weight);
    ids.push_back(model.cell.head.bias);
    return ids;
}

}  // namespace dqlstm
