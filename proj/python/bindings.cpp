#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "dqlstm/ansatz.hpp"
#include "dqlstm/datasets.hpp"
#include "dqlstm/diffqas.hpp"
#include "dqlstm/errors.hpp"
#include "dqlstm/graddiff.hpp"
#include "dqlstm/io.hpp"
#include "dqlstm/qnn.hpp"
#include "dqlstm/trainer.hpp"

namespace py = pybind11;
using namespace dqlstm;

namespace {

py::dict history_dict(const std::vector<EpochRecord>& history) {
    py::list epochs, train_mse, test_mse, wallclock;
    for (const auto& r : history) {
        epochs.append(r.epoch);
        train_mse.append(r.train_mse);
        test_mse.append(r.test_mse);
        wallclock.append(r.wallclock_s);
    }
    py::dict d;
    d["epoch"] = epochs;
    d["train_mse"] = train_mse;
    d["test_mse"] = test_mse;
    d["wallclock_s"] = wallclock;
    return d;
}

py::dict rollout_dict(const std::vector<RolloutRow>& rows) {
    py::list t, target, prediction, split;
    for (const auto& r : rows) {
        t.append(r.t);
        target.append(r.target);
        prediction.append(r.prediction);
        split.append(std::string(to_string(r.split_tag)));
    }
    py::dict d;
    d["t"] = t;
    d["target"] = target;
    d["prediction"] = prediction;
    d["split_tag"] = split;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quantum LSTM with differentiable architecture search over VQC candidates";
    m.attr("__version__") = DQLSTM_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    m.def(
        "enumerate_space",
        [](int n_qubits, int n_layers) {
            std::vector<std::string> out;
            for (const auto& c : enumerate_space(n_qubits, n_layers).configs) out.push_back(to_string(c));
            return out;
        },
        py::arg("n_qubits") = 4, py::arg("n_layers") = 2, "Canonical strings of the candidate circuits, in order.");

    m.def(
        "baseline_configs",
        [] {
            std::vector<std::string> out;
            for (const auto& c : baseline_configs()) out.push_back(to_string(c));
            return out;
        },
        "Circuit strings of config1..config6.");

    m.def(
        "qnn_forward",
        [](const std::string& config, const std::vector<double>& theta, const std::vector<double>& v, int n_layers) {
            return qnn_forward(parse_circuit_config(config), n_layers, theta, v);
        },
        py::arg("config"), py::arg("theta"), py::arg("v"), py::arg("n_layers") = 2,
        "<Z_q> of every qubit for input v and variational angles theta (layer-major).");

    m.def(
        "circuit_jacobian",
        [](const std::string& config, const std::vector<double>& angles, int n_qubits, int n_layers) {
            const auto jac = circuit_jacobian(parse_circuit_config(config), n_qubits, n_layers, angles,
                                              std::vector<bool>(angles.size(), true));
            std::vector<std::vector<double>> rows(jac.n_angles, std::vector<double>(jac.n_outputs));
            for (std::size_t k = 0; k < jac.n_angles; ++k) {
                for (std::size_t q = 0; q < jac.n_outputs; ++q) rows[k][q] = jac.at(k, q);
            }
            return rows;
        },
        py::arg("config"), py::arg("angles"), py::arg("n_qubits") = 4, py::arg("n_layers") = 2,
        "Parameter-shift Jacobian d<Z_q>/d(angle_k) over [encoding angles, variational angles].");

    m.def(
        "block_forward",
        [](const std::vector<double>& logits, const std::vector<std::vector<double>>& thetas,
           const std::vector<double>& v, int n_layers, bool raw_weights) {
            const SearchSpace space = enumerate_space(static_cast<int>(v.size()), n_layers);
            if (logits.size() != space.size()) throw ConfigError("expected one logit per candidate");
            if (thetas.size() != 1 && thetas.size() != space.size()) {
                throw ConfigError("expected one shared angle set or one per candidate");
            }
            ParameterStore store;
            BlockOptions o;
            o.raw_weights = raw_weights;
            DiffQasBlock block = make_block(store, space, thetas.size() == 1 ? Regime::Shared : Regime::NonShared,
                                            0, o);
            store.get(block.logits).values = logits;
            for (std::size_t j = 0; j < thetas.size(); ++j) store.get(block.thetas[j]).values = thetas[j];
            return block_forward(block, store, v);
        },
        py::arg("logits"), py::arg("thetas"), py::arg("v"), py::arg("n_layers") = 2, py::arg("raw_weights") = false,
        "Mixture output of the full candidate space for explicit logits and angle sets.");

    m.def("bessel_j2", &bessel_j2, py::arg("t"));
    m.def(
        "make_series",
        [](const std::string& task, const std::string& overrides) {
            const TrainConfig c = config_from_json(overrides.empty() ? "{}" : overrides);
            const Series s = make_series(parse_task(task), c.data);
            py::dict d;
            d["t"] = s.t_grid;
            d["values"] = s.values;
            return d;
        },
        py::arg("task"), py::arg("config_json") = "",
        "Raw series of a task; the optional JSON overrides the data section of the config.");
    m.def(
        "narma",
        [](int order, int n_points, std::uint64_t seed, const std::string& input) {
            return gen_narma(order, n_points, seed, parse_narma_input(input)).values;
        },
        py::arg("order"), py::arg("n_points"), py::arg("seed"), py::arg("input") = "uniform");

    m.def(
        "default_config", [] { return config_to_json(TrainConfig{}); }, "Default training config as JSON.");

    m.def(
        "train",
        [](const std::string& config_json, const std::function<void(int, double, double)>& on_epoch) {
            const TrainConfig config = config_from_json(config_json);
            TrainResult result;
            {
                py::gil_scoped_release release;
                EpochCallback cb;
                if (on_epoch) {
                    cb = [&](const EpochRecord& rec, const std::vector<RolloutRow>&) {
                        py::gil_scoped_acquire acquire;
                        on_epoch(rec.epoch, rec.train_mse, rec.test_mse);
                    };
                }
                result = train(config, cb);
            }
            py::dict d;
            d["history"] = history_dict(result.history);
            d["rollout"] = rollout_dict(result.rollouts.back());
            d["checkpoint"] = checkpoint_to_json({config, result.model});
            py::list weights;
            for (const auto& w : gate_weights(result.model)) weights.append(py::make_tuple(w.role, w.config, w.weight));
            d["weights"] = weights;
            return d;
        },
        py::arg("config_json"), py::arg("on_epoch") = nullptr,
        "Train from a JSON config; returns history, final rollout, checkpoint JSON and gate weights.");

    m.def(
        "evaluate",
        [](const std::string& checkpoint_json, const std::string& task) {
            const Checkpoint cp = checkpoint_from_json(checkpoint_json);
            const Evaluation e = evaluate(cp, task.empty() ? cp.config.task : parse_task(task));
            py::dict d;
            d["train_mse"] = e.train_mse;
            d["test_mse"] = e.test_mse;
            d["rollout"] = rollout_dict(e.rollout);
            return d;
        },
        py::arg("checkpoint_json"), py::arg("task") = "");

    m.def(
        "save_checkpoint",
        [](const std::string& checkpoint_json, const std::string& path) {
            save_checkpoint(path, checkpoint_from_json(checkpoint_json));
        },
        py::arg("checkpoint_json"), py::arg("path"));
    m.def(
        "load_checkpoint", [](const std::string& path) { return checkpoint_to_json(load_checkpoint(path)); },
        py::arg("path"));
}
