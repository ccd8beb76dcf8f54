#include "dqlstm/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "dqlstm/format.hpp"

namespace dqlstm {

namespace {

// Runs fn(i) for i in [0, n). Each index writes only its own output slot, so
// the result is independent of the thread count.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < std::min(workers, n); ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::string describe_norms(int epoch, int batch,
                           const std::vector<std::pair<std::string, double>>& norms) {
    std::ostringstream os;
    os << "training aborted: non-finite loss at epoch " << epoch << ", batch " << batch
       << "; parameter norms:";
    for (const auto& [name, norm] : norms) os << ' ' << name << '=' << format_double(norm);
    return os.str();
}

std::vector<std::pair<std::string, double>> parameter_norms(const ParameterStore& store) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& p : store.all()) {
        double s = 0.0;
        for (double v : p.values) s += v * v;
        out.emplace_back(p.name, std::sqrt(s));
    }
    return out;
}

bool grad_finite(const Grad& g) {
    for (const auto& [id, values] : g) {
        for (double v : values) {
            if (!std::isfinite(v)) return false;
        }
    }
    return true;
}

}  // namespace

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning rate must be positive");
    }
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (window < 1) throw ConfigError("window length must be >= 1");
    if (hidden < 1 || n_layers < 1) throw ConfigError("hidden size and layers must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (clip_norm && !(*clip_norm > 0.0)) throw ConfigError("clip norm must be positive");
    if (mode.is_baseline() && (mode.baseline < 1 || mode.baseline > 6)) {
        throw ConfigError("baseline index must be 1..6");
    }
}

ModelOptions TrainConfig::model_options() const {
    ModelOptions o;
    o.mode = mode;
    o.hidden = hidden;
    o.n_layers = n_layers;
    o.raw_weights = raw_weights;
    o.trainable_init = init;
    return o;
}

double mse_loss(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.empty() || predictions.size() != targets.size()) {
        throw ConfigError("mse needs two non-empty vectors of equal length");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - targets[i];
        s += d * d;
    }
    return s / static_cast<double>(predictions.size());
}

void adam_step(ParameterStore& params, const Grad& grads, AdamState& state,
               const AdamOptions& o) {
    for (const auto& [id, g] : grads) {
        for (double d : g) {
            if (!std::isfinite(d)) {
                throw NumericError("non-finite gradient for parameter " + std::to_string(id) + " (" +
                                   params.get(id).name + ")");
            }
        }
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(o.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(o.beta2, static_cast<double>(state.step));
    for (const auto& [id, g] : grads) {
        if (!params.trainable(id)) continue;
        auto& values = params.get(id).values;
        if (g.size() != values.size()) {
            throw ConfigError("gradient shape mismatch for parameter " + params.get(id).name);
        }
        auto& m = state.m[id];
        auto& v = state.v[id];
        if (m.empty()) {
            m.assign(g.size(), 0.0);
            v.assign(g.size(), 0.0);
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * g[i];
            v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * g[i] * g[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            values[i] -= o.learning_rate * m_hat / (std::sqrt(v_hat) + o.epsilon);
        }
    }
}

double clip_grad_norm(Grad& grads, double max_norm) {
    double s = 0.0;
    for (const auto& [id, g] : grads) {
        for (double d : g) s += d * d;
    }
    const double norm = std::sqrt(s);
    if (norm > max_norm) {
        const double factor = max_norm / norm;
        for (auto& [id, g] : grads) {
            for (double& d : g) d *= factor;
        }
    }
    return norm;
}

TrainingAborted::TrainingAborted(int epoch, int batch,
                                 std::vector<std::pair<std::string, double>> norms)
    : NumericError(describe_norms(epoch, batch, norms)),
      epoch_(epoch),
      batch_(batch),
      norms_(std::move(norms)) {}

Evaluation evaluate_model(const QlstmModel& model, const Series& series,
                          const WindowedSeries& data, int threads) {
    Evaluation out;
    out.rollout.resize(data.windows.size());
    parallel_for(data.windows.size(), threads, [&](std::size_t k) {
        const auto& w = data.windows[k];
        auto& row = out.rollout[k];
        row.index = w.target_index;
        row.t = series.t_grid.at(w.target_index);
        row.target = w.target;
        row.prediction = unroll(model, w.inputs);
        row.split_tag = w.split_tag;
    });
    std::vector<double> pred[2], target[2];
    for (const auto& row : out.rollout) {
        const int s = row.split_tag == Split::Train ? 0 : 1;
        pred[s].push_back(row.prediction);
        target[s].push_back(row.target);
    }
    out.train_mse = pred[0].empty() ? 0.0 : mse_loss(pred[0], target[0]);
    out.test_mse = pred[1].empty() ? 0.0 : mse_loss(pred[1], target[1]);
    return out;
}

WindowGradient window_gradient(const QlstmModel& model, const SeriesWindow& window) {
    Tape tape;
    const NodeId pred = record_unroll(tape, model, window.inputs);
    const NodeId target = tape.input({window.target});
    const NodeId loss = tape.mean(tape.square(tape.sub(pred, target)));
    WindowGradient out;
    out.loss = tape.value(loss)[0];
    out.grad = tape.backward(loss);
    return out;
}

WindowGradient batch_gradient(const QlstmModel& model, std::span<const SeriesWindow* const> batch,
                              int threads) {
    if (batch.empty()) throw ConfigError("empty batch");
    std::vector<WindowGradient> parts(batch.size());
    parallel_for(batch.size(), threads,
                 [&](std::size_t k) { parts[k] = window_gradient(model, *batch[k]); });

    const double inv = 1.0 / static_cast<double>(batch.size());
    WindowGradient total;
    for (const auto& part : parts) {
        total.loss += part.loss * inv;
        for (const auto& [id, g] : part.grad) {
            auto& dst = total.grad[id];
            if (dst.empty()) dst.assign(g.size(), 0.0);
            for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i] * inv;
        }
    }
    return total;
}

TrainResult train(const TrainConfig& config, const EpochCallback& on_epoch) {
    config.validate();
    const Series series = make_series(config.task, config.data);
    const WindowedSeries data = prepare_windows(series, config.window);

    TrainResult result;
    result.model = make_model(config.model_options(), config.seed);
    QlstmModel& model = result.model;

    std::vector<std::pair<ParamId, std::vector<double>>> frozen;
    for (ParamId id : quantum_parameters(model)) {
        if (!model.params.trainable(id)) frozen.emplace_back(id, model.params.get(id).values);
    }

    std::vector<const SeriesWindow*> train_set;
    for (const auto& w : data.windows) {
        if (w.split_tag == Split::Train) train_set.push_back(&w);
    }
    if (train_set.empty()) throw ConfigError("no training windows");

    AdamState adam;
    AdamOptions adam_options;
    adam_options.learning_rate = config.learning_rate;
    std::mt19937_64 shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    const auto start = std::chrono::steady_clock::now();

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(train_set.begin(), train_set.end(), shuffle_rng);
        int batch_index = 0;
        for (std::size_t b = 0; b < train_set.size(); b += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t len =
                std::min(static_cast<std::size_t>(config.batch_size), train_set.size() - b);
            WindowGradient step;
            try {
                step = batch_gradient(model, std::span(train_set).subspan(b, len), config.threads);
            } catch (const NumericError&) {
                throw TrainingAborted(epoch, batch_index, parameter_norms(model.params));
            }
            if (!std::isfinite(step.loss) || !grad_finite(step.grad)) {
                throw TrainingAborted(epoch, batch_index, parameter_norms(model.params));
            }
            if (config.clip_norm) clip_grad_norm(step.grad, *config.clip_norm);
            adam_step(model.params, step.grad, adam, adam_options);
            ++batch_index;
        }

        Evaluation eval = evaluate_model(model, series, data, config.threads);
        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_mse = eval.train_mse;
        rec.test_mse = eval.test_mse;
        rec.wallclock_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!std::isfinite(rec.train_mse) || !std::isfinite(rec.test_mse)) {
            throw TrainingAborted(epoch, batch_index, parameter_norms(model.params));
        }
        result.history.push_back(rec);
        if (on_epoch) on_epoch(rec, eval.rollout);
        result.rollouts.push_back(std::move(eval.rollout));
    }

    for (const auto& [id, values] : frozen) {
        if (model.params.get(id).values != values) {
            throw Error("frozen parameter " + model.params.get(id).name + " changed during training");
        }
    }
    return result;
}

Evaluation evaluate(const Checkpoint& checkpoint, Task task) {
    if (task != checkpoint.config.task) {
        throw ConfigError("checkpoint was trained on " + std::string(to_string(checkpoint.config.task)) +
                          ", not " + std::string(to_string(task)));
    }
    const Series series = make_series(task, checkpoint.config.data);
    const WindowedSeries data = prepare_windows(series, checkpoint.config.window);
    return evaluate_model(checkpoint.model, series, data, checkpoint.config.threads);
}

}  // namespace dqlstm
