#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dqlstm/trainer.hpp"

namespace dqlstm {

// TrainConfig <-> JSON text. Parsing starts from `base` and only overrides
// the keys present, so a partial file layers on top of defaults.
std::string config_to_json(const TrainConfig& config, int indent = 2);
TrainConfig config_from_json(std::string_view text, TrainConfig base = {});

// Checkpoint: config echo, seed, per-gate config strings and every parameter
// by name. Doubles are written in shortest round-trip form, so a reload is
// bit-identical.
std::string checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(std::string_view text);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// epoch,train_mse,test_mse
void write_history_csv(std::ostream& out, std::span<const EpochRecord> history);
// epoch,wallclock_s
void write_timing_csv(std::ostream& out, std::span<const EpochRecord> history);
// t,target,prediction,split_tag
void write_rollout_csv(std::ostream& out, std::span<const RolloutRow> rollout);
std::vector<RolloutRow> read_rollout_csv(std::istream& in);

struct WeightEntry {
    std::string role;
    std::string config;
    double weight = 0.0;
};
// Mixture weights of every gate block; a fixed baseline block reports weight 1.
std::vector<WeightEntry> gate_weights(const QlstmModel& model);
// gate_role,config,weight
void write_weights_csv(std::ostream& out, std::span<const WeightEntry> weights);

// Target and prediction polylines with a dashed line at the first test row.
std::string render_rollout_svg(std::span<const RolloutRow> rollout, std::string_view title = {});

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

std::string rollout_file_name(int epoch);

}  // namespace dqlstm
