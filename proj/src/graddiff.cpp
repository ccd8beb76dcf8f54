#include "dqlstm/graddiff.hpp"

#include <cmath>
#include <string>

#include "dqlstm/errors.hpp"
#include "dqlstm/qnn.hpp"

namespace dqlstm {

namespace {

std::vector<double> shifted(std::span<const double> angles, std::size_t index, double delta) {
    std::vector<double> out(angles.begin(), angles.end());
    out[index] += delta;
    return out;
}

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw NumericError(std::string("non-finite ") + what);
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

const char* op_name(OpKind op) {
    switch (op) {
        case OpKind::Input: return "input";
        case OpKind::Parameter: return "parameter";
        case OpKind::Sigmoid: return "sigmoid";
        case OpKind::Tanh: return "tanh";
        case OpKind::Add: return "add";
        case OpKind::Sub: return "sub";
        case OpKind::Mul: return "mul";
        case OpKind::Scale: return "scale";
        case OpKind::Dot: return "dot";
        case OpKind::Softmax: return "softmax";
        case OpKind::Affine: return "affine";
        case OpKind::Concat: return "concat";
        case OpKind::Mix: return "mix";
        case OpKind::Mean: return "mean";
        case OpKind::Square: return "square";
        case OpKind::Quantum: return "quantum";
    }
    return "?";
}

[[noreturn]] void shape_error(OpKind op, const std::string& detail) {
    throw ConfigError(std::string(op_name(op)) + ": " + detail);
}

}  // namespace

double param_shift_derivative(const ExpectationFn& eval, std::span<const double> angles,
                              std::size_t index) {
    if (index >= angles.size()) throw IndexError("shift index out of range");
    const double plus = eval(shifted(angles, index, kShift));
    const double minus = eval(shifted(angles, index, -kShift));
    require_finite(plus, "expectation in parameter shift");
    require_finite(minus, "expectation in parameter shift");
    return 0.5 * (plus - minus);
}

std::vector<double> param_shift_derivative(const ExpectationVectorFn& eval,
                                           std::span<const double> angles, std::size_t index) {
    if (index >= angles.size()) throw IndexError("shift index out of range");
    const auto plus = eval(shifted(angles, index, kShift));
    const auto minus = eval(shifted(angles, index, -kShift));
    if (plus.size() != minus.size()) throw ConfigError("expectation size changed under shift");
    std::vector<double> out(plus.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        require_finite(plus[i], "expectation in parameter shift");
        require_finite(minus[i], "expectation in parameter shift");
        out[i] = 0.5 * (plus[i] - minus[i]);
    }
    return out;
}

ShiftJacobian circuit_jacobian(const CircuitConfig& config, int n_qubits, int n_layers,
                               std::span<const double> angles, const std::vector<bool>& wanted) {
    const std::size_t n_angles = static_cast<std::size_t>((n_layers + 1) * n_qubits);
    if (angles.size() != n_angles || wanted.size() != n_angles) {
        throw ConfigError("jacobian: angle vector has wrong length");
    }
    const auto base = compile_circuit(config, n_qubits, n_layers, angles.first(n_qubits),
                                      angles.subspan(n_qubits));

    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < base.size(); ++i) {
        const auto* g = std::get_if<PlacedGate>(&base[i]);
        if (g && g->gate.kind != GateKind::H) slots.push_back(i);
    }

    ShiftJacobian jac;
    jac.n_angles = n_angles;
    jac.n_outputs = static_cast<std::size_t>(n_qubits);
    jac.values.assign(n_angles * jac.n_outputs, 0.0);

    Statevector prefix(n_qubits);
    std::size_t applied = 0;
    for (std::size_t k = 0; k < n_angles; ++k) {
        if (!wanted[k]) continue;
        while (applied < slots[k]) apply_instruction(prefix, base[applied++]);
        const auto& slot = std::get<PlacedGate>(base[slots[k]]);

        auto run_shifted = [&](double delta) {
            Statevector s = prefix;
            s.apply(make_gate(slot.gate.kind, angles[k] + delta), slot.target);
            for (std::size_t j = slots[k] + 1; j < base.size(); ++j) apply_instruction(s, base[j]);
            return z_expectations(s);
        };
        const auto plus = run_shifted(kShift);
        const auto minus = run_shifted(-kShift);
        for (std::size_t o = 0; o < jac.n_outputs; ++o) {
            jac.values[k * jac.n_outputs + o] = 0.5 * (plus[o] - minus[o]);
        }
    }
    return jac;
}

// ---------------------------------------------------------------------------

NodeId Tape::push(TapeNode node) {
    nodes_.push_back(std::move(node));
    return nodes_.size() - 1;
}

NodeId Tape::input(std::vector<double> value) {
    TapeNode n;
    n.op = OpKind::Input;
    n.value = std::move(value);
    return push(std::move(n));
}

NodeId Tape::parameter(const ParameterStore& store, ParamId id) {
    if (auto it = param_nodes_.find(id); it != param_nodes_.end()) return it->second;
    const auto& p = store.get(id);
    TapeNode n;
    n.op = OpKind::Parameter;
    n.param = id;
    n.value = p.values;
    n.requires_grad = p.trainable;
    const NodeId nid = push(std::move(n));
    param_nodes_.emplace(id, nid);
    return nid;
}

NodeId Tape::mix(NodeId weights, std::span<const NodeId> candidates) {
    std::vector<NodeId> inputs;
    inputs.reserve(candidates.size() + 1);
    inputs.push_back(weights);
    inputs.insert(inputs.end(), candidates.begin(), candidates.end());
    return record(OpKind::Mix, inputs);
}

NodeId Tape::record(OpKind op, std::span<const NodeId> inputs, double scalar) {
    if (op == OpKind::Input || op == OpKind::Parameter || op == OpKind::Quantum) {
        shape_error(op, "not a classical operator");
    }
    for (NodeId id : inputs) {
        if (id >= nodes_.size()) shape_error(op, "input node does not exist");
    }
    TapeNode n;
    n.op = op;
    n.inputs.assign(inputs.begin(), inputs.end());
    n.scalar = scalar;
    for (NodeId id : inputs) n.requires_grad = n.requires_grad || nodes_[id].requires_grad;
    n.value = evaluate(n);
    return push(std::move(n));
}

NodeId Tape::quantum(const CircuitConfig& config, int n_layers, NodeId theta, NodeId v) {
    if (theta >= nodes_.size() || v >= nodes_.size()) {
        shape_error(OpKind::Quantum, "input node does not exist");
    }
    TapeNode n;
    n.op = OpKind::Quantum;
    n.inputs = {theta, v};
    n.config = config;
    n.n_layers = n_layers;
    n.requires_grad = nodes_[theta].requires_grad || nodes_[v].requires_grad;
    n.value = evaluate(n);
    return push(std::move(n));
}

std::vector<double> Tape::evaluate(const TapeNode& node) const {
    auto in = [&](std::size_t k) -> const std::vector<double>& {
        return nodes_[node.inputs[k]].value;
    };
    auto arity = [&](std::size_t expected) {
        if (node.inputs.size() != expected) {
            shape_error(node.op, "expected " + std::to_string(expected) + " inputs");
        }
    };
    auto same_size = [&](const std::vector<double>& a, const std::vector<double>& b) {
        if (a.size() != b.size()) {
            shape_error(node.op, "size mismatch " + std::to_string(a.size()) + " vs " +
                                     std::to_string(b.size()));
        }
    };

    std::vector<double> out;
    switch (node.op) {
        case OpKind::Input:
        case OpKind::Parameter:
            return node.value;
        case OpKind::Sigmoid:
        case OpKind::Tanh:
        case OpKind::Scale:
        case OpKind::Square: {
            arity(1);
            out = in(0);
            for (auto& x : out) {
                switch (node.op) {
                    case OpKind::Sigmoid: x = logistic(x); break;
                    case OpKind::Tanh: x = std::tanh(x); break;
                    case OpKind::Scale: x *= node.scalar; break;
                    default: x = x * x; break;
                }
            }
            return out;
        }
        case OpKind::Add:
        case OpKind::Sub:
        case OpKind::Mul: {
            arity(2);
            same_size(in(0), in(1));
            out = in(0);
            for (std::size_t i = 0; i < out.size(); ++i) {
                if (node.op == OpKind::Add) out[i] += in(1)[i];
                else if (node.op == OpKind::Sub) out[i] -= in(1)[i];
                else out[i] *= in(1)[i];
            }
            return out;
        }
        case OpKind::Dot: {
            arity(2);
            same_size(in(0), in(1));
            double s = 0.0;
            for (std::size_t i = 0; i < in(0).size(); ++i) s += in(0)[i] * in(1)[i];
            return {s};
        }
        case OpKind::Softmax: {
            arity(1);
            const auto& x = in(0);
            if (x.empty()) shape_error(node.op, "empty input");
            double mx = x[0];
            for (double v : x) mx = std::max(mx, v);
            out.resize(x.size());
            double total = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                out[i] = std::exp(x[i] - mx);
                total += out[i];
            }
            for (auto& v : out) v /= total;
            return out;
        }
        case OpKind::Affine: {
            arity(3);
            const auto& w = in(0);
            const auto& b = in(1);
            const auto& x = in(2);
            if (w.size() != b.size() * x.size()) {
                shape_error(node.op, "weight has " + std::to_string(w.size()) + " entries, need " +
                                         std::to_string(b.size() * x.size()));
            }
            out = b;
            for (std::size_t r = 0; r < b.size(); ++r) {
                for (std::size_t c = 0; c < x.size(); ++c) out[r] += w[r * x.size() + c] * x[c];
            }
            return out;
        }
        case OpKind::Concat: {
            for (std::size_t k = 0; k < node.inputs.size(); ++k) {
                out.insert(out.end(), in(k).begin(), in(k).end());
            }
            return out;
        }
        case OpKind::Mix: {
            if (node.inputs.size() < 2) shape_error(node.op, "needs weights and candidates");
            const auto& w = in(0);
            if (w.size() != node.inputs.size() - 1) {
                shape_error(node.op, "weight count does not match candidate count");
            }
            out.assign(in(1).size(), 0.0);
            // Ascending candidate order, fixed for reproducibility.
            for (std::size_t j = 0; j < w.size(); ++j) {
                const auto& f = in(j + 1);
                same_size(out, f);
                for (std::size_t i = 0; i < out.size(); ++i) out[i] += w[j] * f[i];
            }
            return out;
        }
        case OpKind::Mean: {
            arity(1);
            if (in(0).empty()) shape_error(node.op, "empty input");
            double s = 0.0;
            for (double v : in(0)) s += v;
            return {s / static_cast<double>(in(0).size())};
        }
        case OpKind::Quantum: {
            arity(2);
            const auto& theta = in(0);
            const auto& v = in(1);
            const auto n = v.size();
            if (n == 0 || theta.size() != n * static_cast<std::size_t>(node.n_layers)) {
                shape_error(node.op, "theta/v shapes inconsistent with the circuit");
            }
            return qnn_forward(node.config, node.n_layers, theta, v);
        }
    }
    return out;
}

Grad Tape::backward(NodeId loss) const {
    if (loss >= nodes_.size()) throw IndexError("loss node does not exist");
    if (nodes_[loss].value.size() != 1) {
        throw ConfigError("backward needs a scalar loss, got size " +
                          std::to_string(nodes_[loss].value.size()));
    }

    Grad grad;
    for (const auto& n : nodes_) {
        if (n.op == OpKind::Parameter && n.requires_grad) {
            grad.emplace(n.param, std::vector<double>(n.value.size(), 0.0));
        }
    }

    std::vector<std::vector<double>> adj(nodes_.size());
    adj[loss] = {1.0};

    auto accumulate = [&](NodeId target, std::size_t i, double v) {
        if (!nodes_[target].requires_grad) return;
        auto& a = adj[target];
        if (a.empty()) a.assign(nodes_[target].value.size(), 0.0);
        a[i] += v;
    };

    for (std::size_t idx = loss + 1; idx-- > 0;) {
        const auto& g = adj[idx];
        if (g.empty()) continue;
        const auto& node = nodes_[idx];
        if (!node.requires_grad) continue;
        const auto& y = node.value;
        auto in = [&](std::size_t k) -> const std::vector<double>& {
            return nodes_[node.inputs[k]].value;
        };

        switch (node.op) {
            case OpKind::Input:
                break;
            case OpKind::Parameter: {
                auto& dst = grad[node.param];
                for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
                break;
            }
            case OpKind::Sigmoid:
                for (std::size_t i = 0; i < g.size(); ++i) {
                    accumulate(node.inputs[0], i, g[i] * y[i] * (1.0 - y[i]));
                }
                break;
            case OpKind::Tanh:
                for (std::size_t i = 0; i < g.size(); ++i) {
                    accumulate(node.inputs[0], i, g[i] * (1.0 - y[i] * y[i]));
                }
                break;
            case OpKind::Scale:
                for (std::size_t i = 0; i < g.size(); ++i) {
                    accumulate(node.inputs[0], i, g[i] * node.scalar);
                }
                break;
            case OpKind::Square:
                for (std::size_t i = 0; i < g.size(); ++i) {
                    accumulate(node.inputs[0], i, 2.0 * in(0)[i] * g[i]);
                }
                break;
            case OpKind::Add:
            case OpKind::Sub:
                for (std::size_t i = 0; i < g.size(); ++i) {
                    accumulate(node.inputs[0], i, g[i]);
                    accumulate(node.inputs[1], i, node.op == OpKind::Add ? g[i] : -g[i]);
                }
                break;
            case OpKind::Mul:
                for (std::size_t i = 0; i < g.size(); ++i) {
                    accumulate(node.inputs[0], i, g[i] * in(1)[i]);
                    accumulate(node.inputs[1], i, g[i] * in(0)[i]);
                }
                break;
            case OpKind::Dot:
                for (std::size_t i = 0; i < in(0).size(); ++i) {
                    accumulate(node.inputs[0], i, g[0] * in(1)[i]);
                    accumulate(node.inputs[1], i, g[0] * in(0)[i]);
                }
                break;
            case OpKind::Softmax: {
                double gy = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i) gy += g[i] * y[i];
                for (std::size_t i = 0; i < g.size(); ++i) {
                    accumulate(node.inputs[0], i, y[i] * (g[i] - gy));
                }
                break;
            }
            case OpKind::Affine: {
                const auto& w = in(0);
                const auto& x = in(2);
                const std::size_t cols = x.size();
                for (std::size_t r = 0; r < g.size(); ++r) {
                    accumulate(node.inputs[1], r, g[r]);
                    for (std::size_t c = 0; c < cols; ++c) {
                        accumulate(node.inputs[0], r * cols + c, g[r] * x[c]);
                        accumulate(node.inputs[2], c, g[r] * w[r * cols + c]);
                    }
                }
                break;
            }
            case OpKind::Concat: {
                std::size_t offset = 0;
                for (NodeId part : node.inputs) {
                    const std::size_t len = nodes_[part].value.size();
                    for (std::size_t i = 0; i < len; ++i) accumulate(part, i, g[offset + i]);
                    offset += len;
                }
                break;
            }
            case OpKind::Mix: {
                const auto& w = in(0);
                for (std::size_t j = 0; j < w.size(); ++j) {
                    const auto& f = in(j + 1);
                    double gf = 0.0;
                    for (std::size_t i = 0; i < g.size(); ++i) gf += g[i] * f[i];
                    accumulate(node.inputs[0], j, gf);
                    if (nodes_[node.inputs[j + 1]].requires_grad) {
                        for (std::size_t i = 0; i < g.size(); ++i) {
                            accumulate(node.inputs[j + 1], i, w[j] * g[i]);
                        }
                    }
                }
                break;
            }
            case OpKind::Mean: {
                const double share = g[0] / static_cast<double>(in(0).size());
                for (std::size_t i = 0; i < in(0).size(); ++i) accumulate(node.inputs[0], i, share);
                break;
            }
            case OpKind::Quantum: {
                const NodeId theta_id = node.inputs[0];
                const NodeId v_id = node.inputs[1];
                const auto& theta = in(0);
                const auto& v = in(1);
                const std::size_t n = v.size();
                const bool want_theta = nodes_[theta_id].requires_grad;
                const bool want_v = nodes_[v_id].requires_grad;

                std::vector<double> angles(n + theta.size());
                for (std::size_t q = 0; q < n; ++q) angles[q] = encoding_angle(v[q]);
                std::copy(theta.begin(), theta.end(), angles.begin() + static_cast<long>(n));
                std::vector<bool> wanted(angles.size(), false);
                for (std::size_t k = 0; k < angles.size(); ++k) {
                    wanted[k] = k < n ? want_v : want_theta;
                }
                const auto jac = circuit_jacobian(node.config, static_cast<int>(n), node.n_layers,
                                                  angles, wanted);
                for (std::size_t k = 0; k < angles.size(); ++k) {
                    if (!wanted[k]) continue;
                    double s = 0.0;
                    for (std::size_t o = 0; o < n; ++o) s += g[o] * jac.at(k, o);
                    if (k < n) {
                        accumulate(v_id, k, s / (1.0 + v[k] * v[k]));
                    } else {
                        accumulate(theta_id, k - n, s);
                    }
                }
                break;
            }
        }
    }

    for (const auto& [id, values] : grad) {
        for (double d : values) {
            if (!std::isfinite(d)) {
                throw NumericError("non-finite gradient for parameter " + std::to_string(id));
            }
        }
    }
    return grad;
}

bool Tape::replay_matches() const {
    for (const auto& n : nodes_) {
        if (evaluate(n) != n.value) return false;
    }
    return true;
}

}  // namespace dqlstm
