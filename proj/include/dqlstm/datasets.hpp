#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace dqlstm {

enum class Task { Bessel, DampedSHM, DelayedQuantumControl, Narma5, Narma10 };
inline constexpr Task kAllTasks[] = {Task::Bessel, Task::DampedSHM, Task::DelayedQuantumControl,
                                     Task::Narma5, Task::Narma10};

// CLI spelling: bessel, damped-shm, delayed-qc, narma5, narma10.
std::string_view to_string(Task task);
std::string_view display_name(Task task);
Task parse_task(std::string_view text);

struct Series {
    Task name = Task::Bessel;
    std::vector<double> values;
    std::vector<double> t_grid;
};

// NARMA drive. Uniform: u_t ~ U[0, 0.5] from std::mt19937_64(seed).
// Sinusoid: u_t = 0.1 (sin(2 pi 2.11 t/100) sin(2 pi 3.73 t/100) sin(2 pi 4.11 t/100) + 1).
enum class NarmaInput { Sinusoid, Uniform };
std::string_view to_string(NarmaInput input);
NarmaInput parse_narma_input(std::string_view text);

struct DataOptions {
    int n_points = 90;
    double t_max = 20.0;  // Bessel and damped SHM horizon
    double gamma = 0.1;
    double omega = 1.0;
    std::uint64_t narma_seed = 42;
    NarmaInput narma_input = NarmaInput::Uniform;
};

// J_2 by its power series, summed until a term drops below 1e-15 in magnitude.
double bessel_j2(double t);

Series gen_bessel(int n_points, double t_max = 20.0);
Series gen_damped_shm(int n_points, double gamma, double omega, double t_max = 20.0);

// x'(t) = a x(t) + b x(t - tau), x(t <= 0) = history.
struct DelayParams {
    double a = -0.1;
    double b = -0.5;
    double tau = 10.0;
    double history = 1.0;
    double step = 0.1;
};

// Fixed-step RK4; delayed values off the grid come from cubic Hermite
// interpolation of the stored trajectory. Returns x at t = 0, dt, 2 dt, ...
std::vector<double> solve_delay(const DelayParams& params, int n_samples, double sample_dt = 1.0);
Series gen_delayed_quantum_control(int n_points, const DelayParams& params = {});

std::vector<double> narma_drive(NarmaInput input, int n_points, std::uint64_t seed);

// y_{t+1} = 0.3 y_t + 0.05 y_t sum_{i<order} y_{t-i} + 1.5 u_{t-order+1} u_t + 0.1,
// zero padding before t = 0. The seed only matters for the uniform drive.
Series gen_narma(int order, int n_points, std::uint64_t seed,
                 NarmaInput input = NarmaInput::Uniform);

Series make_series(Task task, const DataOptions& options = {});

enum class Split { Train, Test };
std::string_view to_string(Split split);

struct SeriesWindow {
    std::vector<double> inputs;
    double target = 0.0;
    Split split_tag = Split::Train;
    std::size_t target_index = 0;
};

struct WindowedSeries {
    std::vector<double> scaled;
    double train_min = 0.0;
    double train_max = 0.0;
    std::size_t split_index = 0;  // floor(2L/3); indices below are training data
    std::vector<SeriesWindow> windows;
};

// Min-max scaling with statistics from the training portion only, then
// sliding windows of length n. Windows with target index < floor(2L/3) are Train.
WindowedSeries prepare_windows(const Series& series, int n = 4);
std::vector<SeriesWindow> scale_and_window(const Series& series, int n = 4);

// Columns t,raw,scaled,split_tag preceded by one '#' line of generation parameters.
void write_series_csv(std::ostream& out, const Series& series, const WindowedSeries& windows,
                      const std::string& parameters);

}  // namespace dqlstm
