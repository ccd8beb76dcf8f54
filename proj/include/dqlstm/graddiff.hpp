#pragma once

#include <functional>
#include <initializer_list>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "dqlstm/ansatz.hpp"
#include "dqlstm/params.hpp"

namespace dqlstm {

// ---------------------------------------------------------------------------
// Parameter-shift rule
// ---------------------------------------------------------------------------

inline constexpr double kShift = 1.5707963267948966;  // pi / 2

using ExpectationFn = std::function<double(std::span<const double>)>;
using ExpectationVectorFn = std::function<std::vector<double>(std::span<const double>)>;

// [eval(angles + pi/2 e_i) - eval(angles - pi/2 e_i)] / 2. Exact for any
// expectation in which angle i drives a single RX/RY/RZ gate.
double param_shift_derivative(const ExpectationFn& eval, std::span<const double> angles,
                              std::size_t index);
std::vector<double> param_shift_derivative(const ExpectationVectorFn& eval,
                                           std::span<const double> angles, std::size_t index);

// Jacobian of every <Z_q> w.r.t. the concatenated angle vector
// [encoding (n), variational (n_layers * n)], via the shift rule. The state
// up to each parametric gate is simulated once and reused for both shifts.
// Rows for angles with wanted[k] == false are left zero.
struct ShiftJacobian {
    std::size_t n_angles = 0;
    std::size_t n_outputs = 0;
    std::vector<double> values;  // row-major, [angle][output]

    double at(std::size_t angle, std::size_t output) const {
        return values[angle * n_outputs + output];
    }
};

ShiftJacobian circuit_jacobian(const CircuitConfig& config, int n_qubits, int n_layers,
                               std::span<const double> angles, const std::vector<bool>& wanted);

// ---------------------------------------------------------------------------
// Reverse-mode tape
// ---------------------------------------------------------------------------

enum class OpKind {
    Input,      // constant leaf
    Parameter,  // leaf bound to a ParamId
    Sigmoid,
    Tanh,
    Add,
    Sub,
    Mul,      // elementwise product
    Scale,    // multiply by a recorded constant
    Dot,      // inner product -> scalar
    Softmax,
    Affine,   // (W, b, x) -> W x + b, W row-major with rows = |b|
    Concat,
    Mix,      // (w, f_1..f_N) -> sum_j w_j f_j
    Mean,     // -> scalar
    Square,   // elementwise x^2
    Quantum,  // (theta, v) -> <Z> vector of a candidate circuit
};

using NodeId = std::size_t;

// Partial derivatives keyed by parameter. Ordered so iteration is deterministic.
using Grad = std::map<ParamId, std::vector<double>>;

struct TapeNode {
    OpKind op = OpKind::Input;
    std::vector<NodeId> inputs;
    std::vector<double> value;
    double scalar = 0.0;
    ParamId param = 0;
    bool requires_grad = false;
    // Quantum nodes only.
    CircuitConfig config{};
    int n_layers = 0;
};

class Tape {
  public:
    NodeId input(std::vector<double> value);
    // One leaf per ParamId; repeated calls return the same node.
    NodeId parameter(const ParameterStore& store, ParamId id);

    // Classical operator; `scalar` is only read by Scale.
    NodeId record(OpKind op, std::span<const NodeId> inputs, double scalar = 0.0);
    NodeId record(OpKind op, std::initializer_list<NodeId> inputs, double scalar = 0.0) {
        return record(op, std::span<const NodeId>(inputs.begin(), inputs.size()), scalar);
    }

    NodeId sigmoid(NodeId a) { return record(OpKind::Sigmoid, {a}); }
    NodeId tanh(NodeId a) { return record(OpKind::Tanh, {a}); }
    NodeId add(NodeId a, NodeId b) { return record(OpKind::Add, {a, b}); }
    NodeId sub(NodeId a, NodeId b) { return record(OpKind::Sub, {a, b}); }
    NodeId mul(NodeId a, NodeId b) { return record(OpKind::Mul, {a, b}); }
    NodeId scale(NodeId a, double s) { return record(OpKind::Scale, {a}, s); }
    NodeId dot(NodeId a, NodeId b) { return record(OpKind::Dot, {a, b}); }
    NodeId softmax(NodeId a) { return record(OpKind::Softmax, {a}); }
    NodeId affine(NodeId w, NodeId b, NodeId x) { return record(OpKind::Affine, {w, b, x}); }
    NodeId concat(std::span<const NodeId> parts) { return record(OpKind::Concat, parts); }
    NodeId mean(NodeId a) { return record(OpKind::Mean, {a}); }
    NodeId square(NodeId a) { return record(OpKind::Square, {a}); }
    NodeId mix(NodeId weights, std::span<const NodeId> candidates);

    // Forward is qnn_forward(config, theta, v); backward applies the shift
    // rule to variational angles and to encoding angles (chained through
    // d arctan(v)/dv = 1/(1+v^2)).
    NodeId quantum(const CircuitConfig& config, int n_layers, NodeId theta, NodeId v);

    const std::vector<double>& value(NodeId id) const { return nodes_.at(id).value; }
    const TapeNode& node(NodeId id) const { return nodes_.at(id); }
    std::size_t size() const { return nodes_.size(); }

    // Reverse accumulation from a scalar node. Returns partials for every
    // parameter leaf that requires a gradient (frozen leaves are omitted).
    Grad backward(NodeId loss) const;

    // Recompute every node from its inputs; true when all match bit-for-bit.
    bool replay_matches() const;

  private:
    std::vector<double> evaluate(const TapeNode& node) const;
    NodeId push(TapeNode node);

    std::vector<TapeNode> nodes_;
    std::unordered_map<ParamId, NodeId> param_nodes_;
};

}  // namespace dqlstm
