#include "dqlstm/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "dqlstm/errors.hpp"
#include "dqlstm/format.hpp"

namespace dqlstm {

std::string_view to_string(Task task) {
    switch (task) {
        case Task::Bessel: return "bessel";
        case Task::DampedSHM: return "damped-shm";
        case Task::DelayedQuantumControl: return "delayed-qc";
        case Task::Narma5: return "narma5";
        case Task::Narma10: return "narma10";
    }
    return "?";
}

std::string_view display_name(Task task) {
    switch (task) {
        case Task::Bessel: return "Bessel";
        case Task::DampedSHM: return "Damped SHM";
        case Task::DelayedQuantumControl: return "Delayed Quantum Control";
        case Task::Narma5: return "NARMA 5";
        case Task::Narma10: return "NARMA 10";
    }
    return "?";
}

Task parse_task(std::string_view text) {
    for (Task t : kAllTasks) {
        if (text == to_string(t)) return t;
    }
    throw ConfigError("unknown task '" + std::string(text) + "'");
}

std::string_view to_string(Split split) { return split == Split::Train ? "train" : "test"; }

namespace {

std::vector<double> uniform_grid(int n_points, double t_max) {
    std::vector<double> t(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) t[i] = t_max * i / (n_points - 1);
    return t;
}

void require_points(int n_points) {
    if (n_points < 20) throw ConfigError("series needs at least 20 points");
}

}  // namespace

double bessel_j2(double t) {
    // term_m = (-1)^m (t/2)^{2m+2} / (m! (m+2)!)
    // long double: near t = 20 the largest terms reach 1e7 and cancel
    const long double half = t / 2.0L;
    long double term = half * half / 2.0L;
    long double sum = 0.0L;
    for (int m = 0; m < 500; ++m) {
        sum += term;
        if (std::abs(term) < 1e-15L) break;
        term *= -half * half / ((m + 1.0L) * (m + 3.0L));
    }
    return static_cast<double>(sum);
}

Series gen_bessel(int n_points, double t_max) {
    require_points(n_points);
    Series s;
    s.name = Task::Bessel;
    s.t_grid = uniform_grid(n_points, t_max);
    s.values.reserve(s.t_grid.size());
    for (double t : s.t_grid) s.values.push_back(bessel_j2(t));
    return s;
}

Series gen_damped_shm(int n_points, double gamma, double omega, double t_max) {
    require_points(n_points);
    if (!(gamma > 0.0) || !(omega > 0.0)) throw ConfigError("gamma and omega must be positive");
    Series s;
    s.name = Task::DampedSHM;
    s.t_grid = uniform_grid(n_points, t_max);
    for (double t : s.t_grid) s.values.push_back(std::exp(-gamma * t) * std::cos(omega * t));
    return s;
}

std::vector<double> solve_delay(const DelayParams& p, int n_samples, double sample_dt) {
    if (n_samples < 1) throw ConfigError("need at least one sample");
    if (!(p.step > 0.0) || !(p.tau > 0.0)) throw ConfigError("step and delay must be positive");
    const double ratio = sample_dt / p.step;
    const auto per_sample = static_cast<long>(std::llround(ratio));
    if (per_sample < 1 || std::abs(ratio - static_cast<double>(per_sample)) > 1e-9) {
        throw ConfigError("sample spacing must be a multiple of the step");
    }
    const long n_steps = per_sample * (n_samples - 1);
    const double h = p.step;

    std::vector<double> x{p.history};
    std::vector<double> dx;  // right-derivative at each stored node

    // x(s) for s inside the history or the integrated range; tau >= h keeps
    // every RK4 stage lookup at or behind the newest node.
    auto lagged = [&](double s) {
        if (s <= 0.0) return p.history;
        const double pos = s / h;
        auto k = static_cast<std::size_t>(std::floor(pos));
        double frac = pos - static_cast<double>(k);
        if (frac < 1e-12) return x[k];
        if (k + 1 >= x.size()) {
            // Rounding put s a hair past the newest node.
            k = x.size() - 2;
            frac = pos - static_cast<double>(k);
        }
        // Cubic Hermite on [t_k, t_{k+1}].
        const double f2 = frac * frac;
        const double f3 = f2 * frac;
        return (2 * f3 - 3 * f2 + 1) * x[k] + (f3 - 2 * f2 + frac) * h * dx[k] +
               (-2 * f3 + 3 * f2) * x[k + 1] + (f3 - f2) * h * dx[k + 1];
    };
    auto rhs = [&](double t, double xv) { return p.a * xv + p.b * lagged(t - p.tau); };

    x.reserve(static_cast<std::size_t>(n_steps + 1));
    dx.reserve(static_cast<std::size_t>(n_steps + 1));
    for (long k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * h;
        const double xk = x.back();
        const double k1 = rhs(t, xk);
        dx.push_back(k1);
        const double k2 = rhs(t + h / 2, xk + h / 2 * k1);
        const double k3 = rhs(t + h / 2, xk + h / 2 * k2);
        const double k4 = rhs(t + h, xk + h * k3);
        x.push_back(xk + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4));
    }

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) out.push_back(x[static_cast<std::size_t>(i * per_sample)]);
    return out;
}

Series gen_delayed_quantum_control(int n_points, const DelayParams& params) {
    require_points(n_points);
    if (params.tau < params.step) throw ConfigError("delay must be at least one step");
    Series s;
    s.name = Task::DelayedQuantumControl;
    s.values = solve_delay(params, n_points, 1.0);
    for (int i = 0; i < n_points; ++i) s.t_grid.push_back(static_cast<double>(i));
    return s;
}

std::string_view to_string(NarmaInput input) {
    return input == NarmaInput::Sinusoid ? "sinusoid" : "uniform";
}

NarmaInput parse_narma_input(std::string_view text) {
    if (text == "sinusoid") return NarmaInput::Sinusoid;
    if (text == "uniform") return NarmaInput::Uniform;
    throw ConfigError("unknown NARMA input '" + std::string(text) + "'");
}

std::vector<double> narma_drive(NarmaInput input, int n_points, std::uint64_t seed) {
    std::vector<double> u(static_cast<std::size_t>(std::max(n_points, 0)));
    if (input == NarmaInput::Uniform) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(0.0, 0.5);
        for (auto& v : u) v = dist(rng);
        return u;
    }
    const double w = 2.0 * std::numbers::pi / 100.0;
    for (std::size_t t = 0; t < u.size(); ++t) {
        const double tt = static_cast<double>(t);
        u[t] = 0.1 * (std::sin(w * 2.11 * tt) * std::sin(w * 3.73 * tt) * std::sin(w * 4.11 * tt) + 1.0);
    }
    return u;
}

Series gen_narma(int order, int n_points, std::uint64_t seed, NarmaInput input) {
    if (order != 5 && order != 10) throw ConfigError("NARMA order must be 5 or 10");
    require_points(n_points);
    const std::vector<double> u = narma_drive(input, n_points, seed);

    std::vector<double> y(static_cast<std::size_t>(n_points), 0.0);
    for (int t = 0; t + 1 < n_points; ++t) {
        double window = 0.0;
        for (int i = 0; i < order && t - i >= 0; ++i) window += y[t - i];
        const double u_lag = t - order + 1 >= 0 ? u[t - order + 1] : 0.0;
        y[t + 1] = 0.3 * y[t] + 0.05 * y[t] * window + 1.5 * u_lag * u[t] + 0.1;
        if (!std::isfinite(y[t + 1]) || std::abs(y[t + 1]) > 1e3) {
            throw GenerationError("NARMA" + std::to_string(order) + " diverged at t=" +
                                  std::to_string(t + 1) + " for seed " + std::to_string(seed));
        }
    }
    Series s;
    s.name = order == 5 ? Task::Narma5 : Task::Narma10;
    s.values = std::move(y);
    for (int i = 0; i < n_points; ++i) s.t_grid.push_back(static_cast<double>(i));
    return s;
}

Series make_series(Task task, const DataOptions& o) {
    switch (task) {
        case Task::Bessel: return gen_bessel(o.n_points, o.t_max);
        case Task::DampedSHM: return gen_damped_shm(o.n_points, o.gamma, o.omega, o.t_max);
        case Task::DelayedQuantumControl: return gen_delayed_quantum_control(o.n_points);
        case Task::Narma5: return gen_narma(5, o.n_points, o.narma_seed, o.narma_input);
        case Task::Narma10: return gen_narma(10, o.n_points, o.narma_seed, o.narma_input);
    }
    throw ConfigError("unknown task");
}

WindowedSeries prepare_windows(const Series& series, int n) {
    const std::size_t len = series.values.size();
    if (n < 1 || len <= static_cast<std::size_t>(n) + 3) {
        throw ConfigError("series of length " + std::to_string(len) + " too short for windows of " +
                          std::to_string(n));
    }
    WindowedSeries out;
    out.split_index = 2 * len / 3;
    const auto train_end = series.values.begin() + static_cast<long>(out.split_index);
    const auto [lo, hi] = std::minmax_element(series.values.begin(), train_end);
    out.train_min = *lo;
    out.train_max = *hi;
    if (!(out.train_max > out.train_min)) {
        throw ScalingError("training portion is constant; cannot min-max scale");
    }
    const double range = out.train_max - out.train_min;
    out.scaled.reserve(len);
    for (double v : series.values) out.scaled.push_back((v - out.train_min) / range);

    for (std::size_t i = 0; i + static_cast<std::size_t>(n) < len; ++i) {
        SeriesWindow w;
        w.inputs.assign(out.scaled.begin() + static_cast<long>(i),
                        out.scaled.begin() + static_cast<long>(i) + n);
        w.target_index = i + static_cast<std::size_t>(n);
        w.target = out.scaled[w.target_index];
        w.split_tag = w.target_index < out.split_index ? Split::Train : Split::Test;
        out.windows.push_back(std::move(w));
    }
    return out;
}

std::vector<SeriesWindow> scale_and_window(const Series& series, int n) {
    return prepare_windows(series, n).windows;
}

void write_series_csv(std::ostream& out, const Series& series, const WindowedSeries& windows,
                      const std::string& parameters) {
    out << "# " << parameters << '\n';
    out << "t,raw,scaled,split_tag\n";
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        out << format_double(series.t_grid[i]) << ',' << format_double(series.values[i]) << ','
            << format_double(windows.scaled[i]) << ','
            << to_string(i < windows.split_index ? Split::Train : Split::Test) << '\n';
    }
}

}  // namespace dqlstm
