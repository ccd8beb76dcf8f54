#include "dqlstm/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dqlstm/ansatz.hpp"
#include "dqlstm/errors.hpp"
#include "dqlstm/format.hpp"
#include "dqlstm/io.hpp"
#include "dqlstm/trainer.hpp"

#ifndef DQLSTM_VERSION
#define DQLSTM_VERSION "0.1.0"
#endif

namespace dqlstm {

namespace fs = std::filesystem;
using nlohmann::json;

const char* version_string() { return DQLSTM_VERSION; }

namespace {

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

const char* rotation_name(Rotation r) {
    switch (r) {
        case Rotation::RX: return "RX";
        case Rotation::RY: return "RY";
        case Rotation::RZ: return "RZ";
    }
    return "?";
}

template <class Fn>
void write_text(const fs::path& path, Fn&& fn) {
    std::ostringstream ss;
    fn(ss);
    write_file_atomic(path, ss.str());
}

struct TrainFlags {
    std::string task, mode, init, narma_input, config_path;
    int epochs = 0, batch = 0, threads = 0, n_points = 0;
    double lr = 0.0, clip = 0.0;
    std::uint64_t seed = 0;
    bool raw_weights = false, quiet = false;
    std::string out;
};

TrainConfig resolve_config(const TrainFlags& f, const CLI::App& cmd) {
    TrainConfig c;
    if (!f.config_path.empty()) c = config_from_json(read_file(f.config_path), c);
    const auto given = [&](const char* name) { return cmd.count(name) > 0; };
    if (given("--task")) c.task = parse_task(f.task);
    if (given("--mode")) c.mode = parse_mode(f.mode);
    if (given("--epochs")) c.epochs = f.epochs;
    if (given("--lr")) c.learning_rate = f.lr;
    if (given("--seed")) c.seed = f.seed;
    if (given("--batch")) c.batch_size = f.batch;
    if (given("--clip")) c.clip_norm = f.clip;
    if (given("--raw-weights")) c.raw_weights = true;
    if (given("--init")) c.init = parse_init_scheme(f.init);
    if (given("--threads")) c.threads = f.threads;
    if (given("--narma-input")) c.data.narma_input = parse_narma_input(f.narma_input);
    if (given("--n-points")) c.data.n_points = f.n_points;
    c.validate();
    return c;
}

int cmd_enumerate(std::ostream& out) {
    const SearchSpace space = enumerate_space(4, 2);
    out << "# search space: " << space.size() << " configurations\n";
    for (const auto& c : space.configs) out << to_string(c) << '\n';
    out << "# baselines: name encoding trainable circuit\n";
    const auto baselines = baseline_configs();
    for (std::size_t i = 0; i < baselines.size(); ++i) {
        out << "config" << i + 1 << ' ' << rotation_name(baselines[i].encoding_rot) << ' '
            << rotation_name(baselines[i].variational_rot) << ' ' << to_string(baselines[i]) << '\n';
    }
    return kExitOk;
}

int cmd_train(const TrainFlags& flags, const CLI::App& cmd, const std::vector<std::string>& argv,
              std::ostream& out, std::ostream& err) {
    TrainConfig config;
    try {
        config = resolve_config(flags, cmd);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n' << cmd.help();
        return kExitUsage;
    }
    const fs::path dir(flags.out);
    fs::create_directories(dir);
    const std::string started = utc_now();
    std::vector<std::string> artifacts;
    const auto emit = [&](const std::string& name, auto&& fn) {
        write_text(dir / name, fn);
        if (std::find(artifacts.begin(), artifacts.end(), name) == artifacts.end()) artifacts.push_back(name);
    };

    emit("config.json", [&](std::ostream& o) { o << config_to_json(config) << '\n'; });
    {
        const Series series = make_series(config.task, config.data);
        const WindowedSeries windows = prepare_windows(series, config.window);
        emit("series.csv", [&](std::ostream& o) {
            write_series_csv(o, series, windows, config_to_json(config, -1));
        });
    }

    TrainResult result;
    try {
        result = train(config, [&](const EpochRecord& rec, const std::vector<RolloutRow>& rollout) {
            emit(rollout_file_name(rec.epoch), [&](std::ostream& o) { write_rollout_csv(o, rollout); });
            if (!flags.quiet) {
                out << "epoch " << rec.epoch << " train_mse " << format_double(rec.train_mse) << " test_mse "
                    << format_double(rec.test_mse) << '\n';
                out.flush();
            }
        });
    } catch (const TrainingAborted& e) {
        json diag;
        diag["error"] = e.what();
        diag["epoch"] = e.epoch();
        diag["batch"] = e.batch();
        json norms = json::object();
        for (const auto& [name, norm] : e.parameter_norms()) norms[name] = format_double(norm);
        diag["parameter_norms"] = std::move(norms);
        diag["config"] = json::parse(config_to_json(config));
        const fs::path path = dir / "abort.json";
        write_file_atomic(path, diag.dump(2) + "\n");
        err << "training aborted: " << e.what() << "\ndiagnostic: " << path.string() << '\n';
        return kExitNumeric;
    }

    emit("history.csv", [&](std::ostream& o) { write_history_csv(o, result.history); });
    emit("timing.csv", [&](std::ostream& o) { write_timing_csv(o, result.history); });
    emit("weights.csv", [&](std::ostream& o) { write_weights_csv(o, gate_weights(result.model)); });
    emit("checkpoint.json", [&](std::ostream& o) { o << checkpoint_to_json({config, result.model}); });

    json manifest;
    manifest["version"] = version_string();
    manifest["command"] = argv;
    manifest["config"] = json::parse(config_to_json(config));
    manifest["artifacts"] = artifacts;
    manifest["started"] = started;
    manifest["finished"] = utc_now();
    const EpochRecord& last = result.history.back();
    manifest["final"] = {{"epoch", last.epoch}, {"train_mse", last.train_mse}, {"test_mse", last.test_mse}};
    write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    out << "final test_mse " << format_double(last.test_mse) << '\n';
    return kExitOk;
}

int cmd_evaluate(const std::string& checkpoint_path, const std::string& task_name, const std::string& out_dir,
                 std::ostream& out, std::ostream& err) {
    Checkpoint cp;
    Evaluation eval;
    try {
        cp = load_checkpoint(checkpoint_path);
        const Task task = task_name.empty() ? cp.config.task : parse_task(task_name);
        eval = evaluate(cp, task);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    out << "train_mse " << format_double(eval.train_mse) << "\ntest_mse " << format_double(eval.test_mse) << '\n';
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "evaluation.csv",
                   [&](std::ostream& o) { write_rollout_csv(o, eval.rollout); });
    }
    return kExitOk;
}

int cmd_plot(const std::string& run_dir, std::ostream& out, std::ostream& err) {
    std::map<int, fs::path> rollouts;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(run_dir, ec)) {
        const std::string name = entry.path().filename().string();
        const std::string prefix = "rollout_epoch";
        if (name.rfind(prefix, 0) != 0 || entry.path().extension() != ".csv") continue;
        const std::string digits = name.substr(prefix.size(), name.size() - prefix.size() - 4);
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) continue;
        rollouts[std::stoi(digits)] = entry.path();
    }
    if (ec || rollouts.empty()) {
        err << "error: no rollout_epoch<k>.csv files in " << run_dir << '\n';
        return kExitUsage;
    }
    std::string label;
    if (fs::exists(fs::path(run_dir) / "config.json")) {
        try {
            const TrainConfig c = config_from_json(read_file(fs::path(run_dir) / "config.json"));
            label = std::string(display_name(c.task)) + ", " + to_string(c.mode) + ", ";
        } catch (const Error&) {
        }
    }
    for (const auto& [epoch, path] : rollouts) {
        std::ifstream in(path);
        std::vector<RolloutRow> rows;
        try {
            rows = read_rollout_csv(in);
        } catch (const ConfigError& e) {
            err << "error: " << path.string() << ": " << e.what() << '\n';
            return kExitUsage;
        }
        fs::path svg = path;
        svg.replace_extension(".svg");
        write_file_atomic(svg, render_rollout_svg(rows, label + "epoch " + std::to_string(epoch)));
        out << svg.string() << '\n';
    }
    return kExitOk;
}

int cmd_summary(const std::vector<std::string>& runs, const std::string& out_path, std::ostream& out,
                std::ostream& err) {
    // mode -> task -> test MSEs over seeds
    std::map<std::string, std::map<std::string, std::vector<double>>> table;
    for (const auto& run : runs) {
        const fs::path manifest = fs::path(run) / "manifest.json";
        if (!fs::exists(manifest)) {
            err << "warning: skipping " << run << " (no manifest.json)\n";
            continue;
        }
        try {
            const json m = json::parse(read_file(manifest));
            table[m.at("config").at("mode").get<std::string>()][m.at("config").at("task").get<std::string>()]
                .push_back(m.at("final").at("test_mse").get<double>());
        } catch (const json::exception& e) {
            err << "error: " << manifest.string() << ": " << e.what() << '\n';
            return kExitUsage;
        }
    }
    std::vector<std::string> modes = {"nonshared", "shared", "reservoir-nonshared", "reservoir-shared"};
    for (int i = 1; i <= 6; ++i) modes.push_back("config" + std::to_string(i));
    std::ostringstream csv;
    csv << "mode";
    for (Task t : kAllTasks) csv << ',' << to_string(t);
    csv << ",runs\n";
    for (const auto& mode : modes) {
        const auto row = table.find(mode);
        if (row == table.end()) continue;
        csv << mode;
        std::size_t count = 0;
        for (Task t : kAllTasks) {
            csv << ',';
            const auto cell = row->second.find(std::string(to_string(t)));
            if (cell == row->second.end()) continue;
            double sum = 0.0;
            for (double v : cell->second) sum += v;
            csv << format_double(sum / static_cast<double>(cell->second.size()));
            count += cell->second.size();
        }
        csv << ',' << count << '\n';
    }
    if (!out_path.empty()) {
        const fs::path p(out_path);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        write_file_atomic(p, csv.str());
    }
    out << csv.str();
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum LSTM with differentiable quantum architecture search", "dqlstm"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version_string()));

    app.add_subcommand("enumerate", "List the 36 candidate circuits and the 6 baselines");

    TrainFlags tf;
    CLI::App* train_cmd = app.add_subcommand("train", "Train one model and write its run directory");
    train_cmd->add_option("--task", tf.task, "bessel|damped-shm|delayed-qc|narma5|narma10");
    train_cmd->add_option("--mode", tf.mode,
                          "nonshared|shared|reservoir-nonshared|reservoir-shared|config1..config6");
    train_cmd->add_option("--epochs", tf.epochs, "Training epochs");
    train_cmd->add_option("--lr", tf.lr, "Adam learning rate");
    train_cmd->add_option("--seed", tf.seed, "Model and shuffle seed");
    train_cmd->add_option("--batch", tf.batch, "Windows per optimizer step");
    train_cmd->add_option("--clip", tf.clip, "Clip the gradient to this global L2 norm");
    train_cmd->add_flag("--raw-weights", tf.raw_weights, "Unnormalized mixture weights instead of softmax");
    train_cmd->add_option("--init", tf.init, "Trainable angle init: zeros|uniform");
    train_cmd->add_option("--threads", tf.threads, "Worker threads (results do not depend on it)");
    train_cmd->add_option("--narma-input", tf.narma_input, "NARMA drive: uniform|sinusoid");
    train_cmd->add_option("--n-points", tf.n_points, "Series length");
    train_cmd->add_option("--config", tf.config_path, "JSON config file; flags override it")
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--out", tf.out, "Run directory")->required();
    train_cmd->add_flag("--quiet", tf.quiet, "No per-epoch progress lines");

    std::string checkpoint_path, eval_task, eval_out;
    CLI::App* eval_cmd = app.add_subcommand("evaluate", "Re-evaluate a saved checkpoint");
    eval_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint.json from a run")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--task", eval_task, "Task to evaluate on (must match the checkpoint)");
    eval_cmd->add_option("--out", eval_out, "Directory for evaluation.csv");

    std::string plot_dir;
    CLI::App* plot_cmd = app.add_subcommand("plot", "Render rollout_epoch<k>.csv files of a run as SVG");
    plot_cmd->add_option("run", plot_dir, "Run directory")->required();

    std::vector<std::string> summary_runs;
    std::string summary_out;
    CLI::App* summary_cmd = app.add_subcommand("summary", "Collate final test MSEs of run directories");
    summary_cmd->add_option("runs", summary_runs, "Run directories")->required();
    summary_cmd->add_option("--out", summary_out, "CSV file to write");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << version_string() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    try {
        if (app.got_subcommand("enumerate")) return cmd_enumerate(out);
        if (app.got_subcommand(train_cmd)) {
            return cmd_train(tf, *train_cmd, std::vector<std::string>(argv, argv + argc), out, err);
        }
        if (app.got_subcommand(eval_cmd)) return cmd_evaluate(checkpoint_path, eval_task, eval_out, out, err);
        if (app.got_subcommand(plot_cmd)) return cmd_plot(plot_dir, out, err);
        if (app.got_subcommand(summary_cmd)) return cmd_summary(summary_runs, summary_out, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace dqlstm
