#include "dqlstm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "dqlstm/errors.hpp"
#include "dqlstm/format.hpp"

namespace dqlstm {

using nlohmann::json;

namespace {

json data_to_json(const DataOptions& d) {
    return json{{"n_points", d.n_points},   {"t_max", d.t_max},
                {"gamma", d.gamma},         {"omega", d.omega},
                {"narma_seed", d.narma_seed}, {"narma_input", std::string(to_string(d.narma_input))}};
}

json config_json(const TrainConfig& c) {
    json j;
    j["task"] = std::string(to_string(c.task));
    j["mode"] = to_string(c.mode);
    j["epochs"] = c.epochs;
    j["lr"] = c.learning_rate;
    j["batch_size"] = c.batch_size;
    j["seed"] = c.seed;
    j["clip"] = c.clip_norm ? json(*c.clip_norm) : json(nullptr);
    j["raw_weights"] = c.raw_weights;
    j["hidden"] = c.hidden;
    j["n_layers"] = c.n_layers;
    j["window"] = c.window;
    j["init"] = std::string(to_string(c.init));
    j["threads"] = c.threads;
    j["data"] = data_to_json(c.data);
    return j;
}

template <class T>
T get_as(const json& j, const char* key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

void apply_data(const json& j, DataOptions& d) {
    if (!j.is_object()) throw ConfigError("config key 'data' must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "n_points") d.n_points = get_as<int>(value, "data.n_points");
        else if (key == "t_max") d.t_max = get_as<double>(value, "data.t_max");
        else if (key == "gamma") d.gamma = get_as<double>(value, "data.gamma");
        else if (key == "omega") d.omega = get_as<double>(value, "data.omega");
        else if (key == "narma_seed") d.narma_seed = get_as<std::uint64_t>(value, "data.narma_seed");
        else if (key == "narma_input") d.narma_input = parse_narma_input(get_as<std::string>(value, "data.narma_input"));
        else throw ConfigError("unknown config key 'data." + key + "'");
    }
}

TrainConfig apply_config(const json& j, TrainConfig c) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        const char* k = key.c_str();
        if (key == "task") c.task = parse_task(get_as<std::string>(value, k));
        else if (key == "mode") c.mode = parse_mode(get_as<std::string>(value, k));
        else if (key == "epochs") c.epochs = get_as<int>(value, k);
        else if (key == "lr") c.learning_rate = get_as<double>(value, k);
        else if (key == "batch_size") c.batch_size = get_as<int>(value, k);
        else if (key == "seed") c.seed = get_as<std::uint64_t>(value, k);
        else if (key == "clip") {
            if (value.is_null()) c.clip_norm.reset();
            else c.clip_norm = get_as<double>(value, k);
        } else if (key == "raw_weights") c.raw_weights = get_as<bool>(value, k);
        else if (key == "hidden") c.hidden = get_as<int>(value, k);
        else if (key == "n_layers") c.n_layers = get_as<int>(value, k);
        else if (key == "window") c.window = get_as<int>(value, k);
        else if (key == "init") c.init = parse_init_scheme(get_as<std::string>(value, k));
        else if (key == "threads") c.threads = get_as<int>(value, k);
        else if (key == "data") apply_data(value, c.data);
        else throw ConfigError("unknown config key '" + key + "'");
    }
    return c;
}

json parse_json(std::string_view text, const char* what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed ") + what + ": " + e.what());
    }
}

std::vector<std::string> gate_configs(const GateBlock& block) {
    std::vector<std::string> out;
    if (const auto* fixed = std::get_if<FixedQnnBlock>(&block)) {
        out.push_back(to_string(fixed->config));
    } else {
        for (const auto& c : std::get<DiffQasBlock>(block).space.configs) out.push_back(to_string(c));
    }
    return out;
}

double parse_double(std::string_view field, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ConfigError("rollout line " + std::to_string(line) + ": bad number '" +
                          std::string(field) + "'");
    }
    return v;
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

std::string config_to_json(const TrainConfig& config, int indent) {
    return config_json(config).dump(indent);
}

TrainConfig config_from_json(std::string_view text, TrainConfig base) {
    return apply_config(parse_json(text, "config"), std::move(base));
}

std::string checkpoint_to_json(const Checkpoint& cp) {
    json j;
    j["format"] = "dqlstm-checkpoint";
    j["version"] = 1;
    j["config"] = config_json(cp.config);
    j["seed"] = cp.model.seed;
    json gates = json::array();
    for (GateRole role : kGateRoles) {
        const GateBlock& block = cp.model.cell.gates[static_cast<std::size_t>(role)];
        json g;
        g["role"] = std::string(to_string(role));
        g["kind"] = std::holds_alternative<FixedQnnBlock>(block) ? "fixed" : "diffqas";
        g["configs"] = gate_configs(block);
        gates.push_back(std::move(g));
    }
    j["gates"] = std::move(gates);
    json params = json::array();
    for (const Parameter& p : cp.model.params.all()) {
        params.push_back(json{{"name", p.name}, {"trainable", p.trainable}, {"values", p.values}});
    }
    j["parameters"] = std::move(params);
    return j.dump(1);
}

Checkpoint checkpoint_from_json(std::string_view text) {
    const json j = parse_json(text, "checkpoint");
    if (!j.is_object() || j.value("format", "") != "dqlstm-checkpoint") {
        throw ConfigError("not a dqlstm checkpoint");
    }
    if (j.value("version", 0) != 1) throw ConfigError("unsupported checkpoint version");
    Checkpoint cp;
    try {
        cp.config = apply_config(j.at("config"), TrainConfig{});
        cp.config.validate();
        const auto seed = j.at("seed").get<std::uint64_t>();
        cp.model = make_model(cp.config.model_options(), seed);
        const json& params = j.at("parameters");
        if (!params.is_array() || params.size() != cp.model.params.size()) {
            throw ConfigError("checkpoint parameter count does not match the model");
        }
        for (const json& entry : params) {
            const auto name = entry.at("name").get<std::string>();
            Parameter& p = cp.model.params.get(cp.model.params.find(name));
            auto values = entry.at("values").get<std::vector<double>>();
            if (values.size() != p.values.size()) {
                throw ConfigError("checkpoint parameter '" + name + "' has " +
                                  std::to_string(values.size()) + " values, expected " +
                                  std::to_string(p.values.size()));
            }
            if (entry.at("trainable").get<bool>() != p.trainable) {
                throw ConfigError("checkpoint parameter '" + name + "' trainable flag mismatch");
            }
            p.values = std::move(values);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed checkpoint: ") + e.what());
    }
    return cp;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
    write_file_atomic(path, checkpoint_to_json(checkpoint));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    return checkpoint_from_json(read_file(path));
}

void write_history_csv(std::ostream& out, std::span<const EpochRecord> history) {
    out << "epoch,train_mse,test_mse\n";
    for (const auto& r : history) {
        out << r.epoch << ',' << format_double(r.train_mse) << ',' << format_double(r.test_mse) << '\n';
    }
}

void write_timing_csv(std::ostream& out, std::span<const EpochRecord> history) {
    out << "epoch,wallclock_s\n";
    for (const auto& r : history) out << r.epoch << ',' << format_double(r.wallclock_s) << '\n';
}

void write_rollout_csv(std::ostream& out, std::span<const RolloutRow> rollout) {
    out << "t,target,prediction,split_tag\n";
    for (const auto& r : rollout) {
        out << format_double(r.t) << ',' << format_double(r.target) << ','
            << format_double(r.prediction) << ',' << to_string(r.split_tag) << '\n';
    }
}

std::vector<RolloutRow> read_rollout_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "t,target,prediction,split_tag") {
        throw ConfigError("rollout CSV header must be 't,target,prediction,split_tag'");
    }
    std::vector<RolloutRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
            fields.push_back(rest.substr(0, pos));
            rest.remove_prefix(pos + 1);
        }
        fields.push_back(rest);
        if (fields.size() != 4) {
            throw ConfigError("rollout line " + std::to_string(line_no) + ": expected 4 fields");
        }
        RolloutRow r;
        r.index = rows.size();
        r.t = parse_double(fields[0], line_no);
        r.target = parse_double(fields[1], line_no);
        r.prediction = parse_double(fields[2], line_no);
        if (fields[3] == "train") r.split_tag = Split::Train;
        else if (fields[3] == "test") r.split_tag = Split::Test;
        else throw ConfigError("rollout line " + std::to_string(line_no) + ": bad split tag");
        rows.push_back(r);
    }
    return rows;
}

std::vector<WeightEntry> gate_weights(const QlstmModel& model) {
    std::vector<WeightEntry> out;
    for (GateRole role : kGateRoles) {
        const GateBlock& block = model.cell.gates[static_cast<std::size_t>(role)];
        const std::string name(to_string(role));
        if (const auto* fixed = std::get_if<FixedQnnBlock>(&block)) {
            out.push_back({name, to_string(fixed->config), 1.0});
            continue;
        }
        for (auto& row : structural_weights(std::get<DiffQasBlock>(block), model.params)) {
            out.push_back({name, std::move(row.config), row.weight});
        }
    }
    return out;
}

void write_weights_csv(std::ostream& out, std::span<const WeightEntry> weights) {
    out << "gate_role,config,weight\n";
    for (const auto& w : weights) out << w.role << ',' << w.config << ',' << format_double(w.weight) << '\n';
}

std::string render_rollout_svg(std::span<const RolloutRow> rollout, std::string_view title) {
    constexpr double width = 800, height = 400, left = 60, right = 20, top = 40, bottom = 40;
    double t0 = 0, t1 = 1, y0 = 0, y1 = 1;
    if (!rollout.empty()) {
        t0 = t1 = rollout.front().t;
        y0 = y1 = rollout.front().target;
        for (const auto& r : rollout) {
            t0 = std::min(t0, r.t);
            t1 = std::max(t1, r.t);
            y0 = std::min({y0, r.target, r.prediction});
            y1 = std::max({y1, r.target, r.prediction});
        }
    }
    if (t1 == t0) t1 = t0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    const auto px = [&](double t) { return left + (t - t0) / (t1 - t0) * (width - left - right); };
    const auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * (height - top - bottom); };

    const auto polyline = [&](bool prediction, std::string_view colour) {
        std::string s = "<polyline fill=\"none\" stroke=\"" + std::string(colour) +
                        "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < rollout.size(); ++i) {
            if (i) s += ' ';
            const auto& r = rollout[i];
            s += fixed2(px(r.t)) + ',' + fixed2(py(prediction ? r.prediction : r.target));
        }
        return s + "\"/>\n";
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty()) {
        svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"14\">" << xml_escape(title) << "</text>\n";
    }
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right
        << "\" height=\"" << height - top - bottom << "\" fill=\"none\" stroke=\"#888\"/>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << fixed2(py(y1 - pad)) << "\" text-anchor=\"end\" "
        << "font-family=\"sans-serif\" font-size=\"10\">" << fixed2(y1 - pad) << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << fixed2(py(y0 + pad)) << "\" text-anchor=\"end\" "
        << "font-family=\"sans-serif\" font-size=\"10\">" << fixed2(y0 + pad) << "</text>\n";
    svg << "<text x=\"" << left << "\" y=\"" << height - bottom + 16 << "\" font-family=\"sans-serif\" "
        << "font-size=\"10\">t = " << format_double(t0) << "</text>\n";
    svg << "<text x=\"" << width - right << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"end\" "
        << "font-family=\"sans-serif\" font-size=\"10\">t = " << format_double(t1) << "</text>\n";

    const auto first_test = std::find_if(rollout.begin(), rollout.end(),
                                         [](const RolloutRow& r) { return r.split_tag == Split::Test; });
    if (first_test != rollout.end()) {
        const std::string x = fixed2(px(first_test->t));
        svg << "<line class=\"split\" x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\""
            << height - bottom << "\" stroke=\"red\" stroke-dasharray=\"6,4\"/>\n";
    }
    svg << "<g class=\"target\">" << polyline(false, "#1f77b4") << "</g>\n";
    svg << "<g class=\"prediction\">" << polyline(true, "#ff7f0e") << "</g>\n";
    svg << "<text x=\"" << width - right - 110 << "\" y=\"" << top + 16
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#1f77b4\">target</text>\n";
    svg << "<text x=\"" << width - right - 60 << "\" y=\"" << top + 16
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#ff7f0e\">prediction</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw Error("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot move " + tmp.string() + " to " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string rollout_file_name(int epoch) { return "rollout_epoch" + std::to_string(epoch) + ".csv"; }

}  // namespace dqlstm
