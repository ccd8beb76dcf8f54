#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dqlstm/diffqas.hpp"
#include "dqlstm/graddiff.hpp"
#include "dqlstm/params.hpp"

namespace dqlstm {

enum class GateRole { Forget, Input, Candidate, Output };
inline constexpr std::array<GateRole, 4> kGateRoles = {GateRole::Forget, GateRole::Input,
                                                       GateRole::Candidate, GateRole::Output};
std::string_view to_string(GateRole role);

// A single hand-designed circuit (the baseline models).
struct FixedQnnBlock {
    CircuitConfig config;
    int n_layers = 2;
    ParamId theta = 0;
};

using GateBlock = std::variant<FixedQnnBlock, DiffQasBlock>;

// y = W x + b with W row-major (out x in).
struct AffineMap {
    ParamId weight = 0;
    ParamId bias = 0;
    int out = 0;
    int in = 0;
};

// Either a DiffQAS regime or one of the six baselines (1-based index).
struct ModelMode {
    std::optional<Regime> regime;
    int baseline = 0;

    static ModelMode diffqas(Regime r) { return {r, 0}; }
    static ModelMode baseline_config(int index);
    bool is_baseline() const { return !regime.has_value(); }
    bool operator==(const ModelMode&) const = default;
};

// "nonshared", "shared", "reservoir-nonshared", "reservoir-shared", "config1".."config6".
std::string to_string(const ModelMode& mode);
ModelMode parse_mode(std::string_view text);

struct ModelOptions {
    ModelMode mode = ModelMode::diffqas(Regime::NonShared);
    int hidden = 3;
    int n_layers = 2;
    bool raw_weights = false;
    InitScheme trainable_init = InitScheme::Uniform;
};

struct QlstmCell {
    int hidden = 3;
    int input_size = 1;
    int n_qubits = 4;  // hidden + input_size
    int n_layers = 2;
    std::array<GateBlock, 4> gates;       // indexed by GateRole
    std::array<AffineMap, 4> projections;  // n_qubits -> hidden
    AffineMap head;                        // hidden -> 1
};

struct QlstmModel {
    ModelOptions options;
    std::uint64_t seed = 0;
    ParameterStore params;
    QlstmCell cell;
};

// Projections start as the first `hidden` rows of the identity with zero
// bias; the output head starts at zero.
QlstmModel make_model(const ModelOptions& options, std::uint64_t seed);

struct CellState {
    std::vector<double> h;
    std::vector<double> c;
};

struct TapeCellState {
    NodeId h = 0;
    NodeId c = 0;
};

NodeId record_gate_block(Tape& tape, const GateBlock& block, const ParameterStore& store, NodeId v);

// One step of the recurrence:
//   v = [h_{t-1}, x_t]
//   f = sigmoid(P_f Q1(v)), i = sigmoid(P_i Q2(v)), g = tanh(P_C Q3(v))
//   c = f*c_{t-1} + i*g,    o = sigmoid(P_o Q4(v)),  h = o*tanh(c)
TapeCellState record_cell_step(Tape& tape, const QlstmModel& model, NodeId x, TapeCellState prev);
TapeCellState record_initial_state(Tape& tape, const QlstmModel& model);

// Feeds the window oldest-first from h = c = 0 and applies the output head.
NodeId record_unroll(Tape& tape, const QlstmModel& model, std::span<const double> window);

CellState cell_step(const QlstmModel& model, double x, const CellState& prev);
double unroll(const QlstmModel& model, std::span<const double> window);

// Quantum angles and logits per regime, plus projections and head.
std::vector<ParamId> trainable_parameters(const QlstmModel& model);

// Every angle set owned by the gate blocks (trainable or frozen).
std::vector<ParamId> quantum_parameters(const QlstmModel& model);

}  // namespace dqlstm
