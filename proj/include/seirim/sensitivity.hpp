#pragma once

// One-parameter sweeps: integrate the model once per grid value, track the
// total infected population I_u + I_r over time, and reduce to a mean curve,
// a mean-square-error curve and a sensitive/insensitive verdict.

#include <string>
#include <vector>

#include "seirim/integrate.hpp"
#include "seirim/model.hpp"

namespace seirim {

// Returns base with the named parameter (b1, beta, mu_c, gamma, d1, k, m, p)
// replaced. Throws ValidationError for unknown names.
ModelParameters with_parameter(const ModelParameters& base, const std::string& name,
                               double value);

struct SweepSpec {
    std::string parameter;
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;

    ModelParameters base;
    StateVector init;
    IncidenceMode mode;
    IntegrationSpec integration;

    void validate() const;

    // lo, lo+step, ... up to hi (hi itself included only when step divides
    // the interval).
    std::vector<double> grid_values() const;
};

struct SweepResult {
    std::vector<double> grid;
    std::vector<double> times;
    // infected[n][j] = I_u + I_r at times[j] for grid[n].
    std::vector<std::vector<double>> infected;
    std::vector<double> mean; // per time sample
    std::vector<double> mse;  // per time sample
};

enum class Sensitivity { Sensitive, Insensitive };

const char* sensitivity_label(Sensitivity s);

// One integration per grid value, parallel over values, reduced in a fixed
// value-sorted order so results do not depend on thread count or on the
// order of the grid.
SweepResult run_sweep(const SweepSpec& spec, int threads = 1);

// Same engine over an explicit list of grid values (any order).
SweepResult run_sweep_over(const SweepSpec& spec, const std::vector<double>& values,
                           int threads = 1);

inline constexpr double kDefaultPeakThreshold = 0.01;
inline constexpr double kDefaultTailThreshold = 1e-4;

// Sensitive iff max_t mse / max(1, (max_t mean)^2) exceeds peak_threshold or
// the final-time mse exceeds tail_threshold.
Sensitivity classify(const SweepResult& result, double peak_threshold = kDefaultPeakThreshold,
                     double tail_threshold = kDefaultTailThreshold);

// The cleaned two-intervals-per-parameter sweep table used by the default
// study. Where the source material left a step size out or malformed, the
// step is (hi-lo)/20; all intervals are recorded here explicitly.
struct SweepInterval {
    std::string parameter;
    int interval_index; // 1 or 2
    double lo;
    double hi;
    double step;
};
const std::vector<SweepInterval>& default_sweep_intervals();

} // namespace seirim
