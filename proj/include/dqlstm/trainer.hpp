#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dqlstm/datasets.hpp"
#include "dqlstm/errors.hpp"
#include "dqlstm/graddiff.hpp"
#include "dqlstm/qlstm.hpp"

namespace dqlstm {

struct TrainConfig {
    Task task = Task::DampedSHM;
    ModelMode mode = ModelMode::diffqas(Regime::NonShared);
    int epochs = 30;
    double learning_rate = 0.02;
    int batch_size = 4;
    std::uint64_t seed = 1;
    std::optional<double> clip_norm;
    bool raw_weights = false;
    int hidden = 3;
    int n_layers = 2;
    int window = 4;
    InitScheme init = InitScheme::Zeros;
    DataOptions data;
    // Worker threads for per-window gradients; results do not depend on it.
    int threads = 1;

    void validate() const;
    ModelOptions model_options() const;
};

struct EpochRecord {
    int epoch = 0;
    double train_mse = 0.0;
    double test_mse = 0.0;
    double wallclock_s = 0.0;  // since the start of training
};

struct RolloutRow {
    std::size_t index = 0;  // target index in the series
    double t = 0.0;
    double target = 0.0;
    double prediction = 0.0;
    Split split_tag = Split::Train;
};

double mse_loss(std::span<const double> predictions, std::span<const double> targets);

struct AdamOptions {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    long step = 0;
    std::map<ParamId, std::vector<double>> m;
    std::map<ParamId, std::vector<double>> v;
};

// Bias-corrected Adam on every parameter present in `grads`.
void adam_step(ParameterStore& params, const Grad& grads, AdamState& state,
               const AdamOptions& options);

// Rescales `grads` in place to global L2 norm <= max_norm; returns the norm before.
double clip_grad_norm(Grad& grads, double max_norm);

// Non-finite loss during training. what() carries the diagnostic snapshot.
class TrainingAborted : public NumericError {
  public:
    TrainingAborted(int epoch, int batch, std::vector<std::pair<std::string, double>> norms);
    int epoch() const { return epoch_; }
    int batch() const { return batch_; }
    const std::vector<std::pair<std::string, double>>& parameter_norms() const { return norms_; }

  private:
    int epoch_;
    int batch_;
    std::vector<std::pair<std::string, double>> norms_;
};

struct Evaluation {
    double train_mse = 0.0;
    double test_mse = 0.0;
    std::vector<RolloutRow> rollout;
};

// One-step-ahead predictions for every window (teacher forced).
Evaluation evaluate_model(const QlstmModel& model, const Series& series,
                          const WindowedSeries& data, int threads = 1);

// Mean-squared loss and gradient of one window.
struct WindowGradient {
    double loss = 0.0;
    Grad grad;
};
WindowGradient window_gradient(const QlstmModel& model, const SeriesWindow& window);

// Batch-mean gradient; accumulation order follows `batch`.
WindowGradient batch_gradient(const QlstmModel& model, std::span<const SeriesWindow* const> batch,
                              int threads = 1);

struct TrainResult {
    QlstmModel model;
    std::vector<EpochRecord> history;
    std::vector<std::vector<RolloutRow>> rollouts;  // one per epoch
};

using EpochCallback = std::function<void(const EpochRecord&, const std::vector<RolloutRow>&)>;

TrainResult train(const TrainConfig& config, const EpochCallback& on_epoch = {});

struct Checkpoint {
    TrainConfig config;
    QlstmModel model;
};

// Re-evaluates a checkpoint on `task`, which must be the task it was trained on.
Evaluation evaluate(const Checkpoint& checkpoint, Task task);

}  // namespace dqlstm
