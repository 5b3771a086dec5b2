#pragma once

// Fixed-step RK4 and adaptive Dormand-Prince 5(4) integration of the model.
//
// Both methods land step boundaries exactly on the requested sample times
// (and on t_end), so recorded samples carry the full order of the scheme.
// Trajectory::sample_at interpolates linearly for off-grid queries.

#include <cstdint>
#include <variant>
#include <vector>

#include "seirim/model.hpp"

namespace seirim {

struct Rk4Fixed {
    double step = 0.1;

    bool operator==(const Rk4Fixed&) const = default;
};

struct Rk45Adaptive {
    double abs_tol = 1e-8;
    double rel_tol = 1e-8;
    double max_step = 10.0;

    bool operator==(const Rk45Adaptive&) const = default;
};

struct IntegrationSpec {
    double t0 = 0.0;
    double t_end = 0.0;
    std::variant<Rk4Fixed, Rk45Adaptive> method = Rk4Fixed{};
    double record_every = 1.0;

    void validate() const;

    bool operator==(const IntegrationSpec&) const = default;
};

struct StepStats {
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;
    std::int64_t rhs_evals = 0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;

    ModelParameters params;
    IncidenceMode mode;
    IntegrationSpec spec;
    StepStats stats;

    // Linear interpolation between stored samples; clamps outside [t0, t_end].
    StateVector sample_at(double t) const;
};

// Integrates from a non-negative initial state. Small negative components
// are tolerated down to -1e-6 (the schemes are not positivity-preserving
// exactly); anything below that raises NumericError naming the time.
// An adaptive step collapsing below 1e-12*(t_end-t0) raises NumericError.
Trajectory integrate(const StateVector& init, const ModelParameters& params,
                     const IncidenceMode& mode, const IntegrationSpec& spec);
Trajectory integrate(const StateVector& init, const ModelParameters& params,
                     const IncidenceMode& mode, const IntegrationSpec& spec,
                     const RateModifiers& mods);

// Empirical convergence order of the fixed RK4 scheme by Richardson step
// halving over a horizon of 128*base_step. Expect a value near 4 in smooth
// regimes.
double convergence_order(const StateVector& init, const ModelParameters& params,
                         const IncidenceMode& mode, double base_step);

} // namespace seirim
