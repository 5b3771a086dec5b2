#include "seirim/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "seirim/errors.hpp"

namespace seirim {

void IntegrationSpec::validate() const
{
    std::ostringstream issues;
    auto require = [&](bool ok, const char* what) {
        if (!ok)
            issues << (issues.tellp() > 0 ? "; " : "") << what;
    };
    require(std::isfinite(t0) && std::isfinite(t_end) && t_end > t0, "t_end must exceed t0");
    require(std::isfinite(record_every) && record_every > 0.0, "record_every must be > 0");
    if (const auto* rk4 = std::get_if<Rk4Fixed>(&method)) {
        require(std::isfinite(rk4->step) && rk4->step > 0.0, "rk4 step must be > 0");
    } else {
        const auto& rk45 = std::get<Rk45Adaptive>(method);
        require(std::isfinite(rk45.abs_tol) && rk45.abs_tol > 0.0, "abs_tol must be > 0");
        require(std::isfinite(rk45.rel_tol) && rk45.rel_tol > 0.0, "rel_tol must be > 0");
        require(std::isfinite(rk45.max_step) && rk45.max_step > 0.0, "max_step must be > 0");
    }
    if (issues.tellp() > 0)
        throw ValidationError("invalid integration spec: " + issues.str());
}

StateVector Trajectory::sample_at(double t) const
{
    if (times.empty())
        throw NumericError("sample_at on empty trajectory");
    if (t <= times.front())
        return states.front();
    if (t >= times.back())
        return states.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    auto a = states[lo].to_array();
    auto b = states[hi].to_array();
    std::array<double, kCompartments> out;
    for (int i = 0; i < kCompartments; ++i)
        out[static_cast<std::size_t>(i)] =
            (1.0 - w) * a[static_cast<std::size_t>(i)] + w * b[static_cast<std::size_t>(i)];
    return StateVector::from_array(out);
}

namespace {

using Vec9 = std::array<double, kCompartments>;

Vec9 eval_rhs(const Vec9& y, const ModelParameters& params, const IncidenceMode& mode,
              const RateModifiers& mods, StepStats& stats)
{
    ++stats.rhs_evals;
    return rhs(StateVector::from_array(y), params, mode, mods).to_array();
}

Vec9 axpy(const Vec9& y, double h, const Vec9& d)
{
    Vec9 out;
    for (std::size_t i = 0; i < kCompartments; ++i)
        out[i] = y[i] + h * d[i];
    return out;
}

void check_positivity(const Vec9& y, double t)
{
    for (std::size_t i = 0; i < kCompartments; ++i) {
        if (y[i] < -1e-6) {
            std::ostringstream msg;
            msg << "positivity violation: " << compartment_label(static_cast<int>(i)) << " = "
                << y[i] << " at t = " << t;
            throw NumericError(msg.str());
        }
    }
}

// One classic RK4 step.
Vec9 rk4_step(const Vec9& y, double t, double h, const ModelParameters& params,
              const IncidenceMode& mode, const RateModifiers& mods, StepStats& stats)
{
    (void)t; // the system is autonomous
    const Vec9 k1 = eval_rhs(y, params, mode, mods, stats);
    const Vec9 k2 = eval_rhs(axpy(y, 0.5 * h, k1), params, mode, mods, stats);
    const Vec9 k3 = eval_rhs(axpy(y, 0.5 * h, k2), params, mode, mods, stats);
    const Vec9 k4 = eval_rhs(axpy(y, h, k3), params, mode, mods, stats);
    Vec9 out;
    for (std::size_t i = 0; i < kCompartments; ++i)
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1c = 35.0 / 384.0, b3c = 500.0 / 1113.0, b4c = 125.0 / 192.0,
                 b5c = -2187.0 / 6784.0, b6c = 11.0 / 84.0;
constexpr double e1c = 71.0 / 57600.0, e3c = -71.0 / 16695.0, e4c = 71.0 / 1920.0,
                 e5c = -17253.0 / 339200.0, e6c = 22.0 / 525.0, e7c = -1.0 / 40.0;

struct Dp45Result {
    Vec9 y_new;
    double err; // scaled RMS error estimate, accept when <= 1
};

Dp45Result dp45_step(const Vec9& y, double h, const ModelParameters& params,
                     const IncidenceMode& mode, const RateModifiers& mods, double abs_tol,
                     double rel_tol, StepStats& stats)
{
    const Vec9 k1 = eval_rhs(y, params, mode, mods, stats);
    Vec9 tmp;
    for (std::size_t i = 0; i < kCompartments; ++i)
        tmp[i] = y[i] + h * a21 * k1[i];
    const Vec9 k2 = eval_rhs(tmp, params, mode, mods, stats);
    for (std::size_t i = 0; i < kCompartments; ++i)
        tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const Vec9 k3 = eval_rhs(tmp, params, mode, mods, stats);
    for (std::size_t i = 0; i < kCompartments; ++i)
        tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const Vec9 k4 = eval_rhs(tmp, params, mode, mods, stats);
    for (std::size_t i = 0; i < kCompartments; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const Vec9 k5 = eval_rhs(tmp, params, mode, mods, stats);
    for (std::size_t i = 0; i < kCompartments; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const Vec9 k6 = eval_rhs(tmp, params, mode, mods, stats);

    Dp45Result res;
    for (std::size_t i = 0; i < kCompartments; ++i)
        res.y_new[i] =
            y[i] + h * (b1c * k1[i] + b3c * k3[i] + b4c * k4[i] + b5c * k5[i] + b6c * k6[i]);
    const Vec9 k7 = eval_rhs(res.y_new, params, mode, mods, stats);

    double sum = 0.0;
    for (std::size_t i = 0; i < kCompartments; ++i) {
        const double e = h * (e1c * k1[i] + e3c * k3[i] + e4c * k4[i] + e5c * k5[i] +
                              e6c * k6[i] + e7c * k7[i]);
        const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(res.y_new[i]));
        sum += (e / sc) * (e / sc);
    }
    res.err = std::sqrt(sum / kCompartments);
    return res;
}

class Recorder {
public:
    Recorder(Trajectory& traj, double t0, double t_end, double every)
        : traj_(traj), t0_(t0), t_end_(t_end), every_(every)
    {
    }

    // Next time the integrator must land on exactly.
    double next_target() const
    {
        const double r = t0_ + static_cast<double>(next_index_) * every_;
        return std::min(r, t_end_);
    }

    void record(double t, const Vec9& y)
    {
        traj_.times.push_back(t);
        traj_.states.push_back(StateVector::from_array(y));
        ++next_index_;
    }

private:
    Trajectory& traj_;
    double t0_;
    double t_end_;
    double every_;
    std::int64_t next_index_ = 1;
};

} // namespace

Trajectory integrate(const StateVector& init, const ModelParameters& params,
                     const IncidenceMode& mode, const IntegrationSpec& spec)
{
    return integrate(init, params, mode, spec, RateModifiers{});
}

Trajectory integrate(const StateVector& init, const ModelParameters& params,
                     const IncidenceMode& mode, const IntegrationSpec& spec,
                     const RateModifiers& mods)
{
    params.validate();
    mode.validate();
    spec.validate();
    if (!init.all_finite())
        throw ValidationError("integrate: initial state has non-finite components");
    if (init.min_component() < 0.0)
        throw ValidationError("integrate: initial state has negative components");

    Trajectory traj;
    traj.params = params;
    traj.mode = mode;
    traj.spec = spec;

    Vec9 y = init.to_array();
    double t = spec.t0;
    traj.times.push_back(t);
    traj.states.push_back(init);

    Recorder rec(traj, spec.t0, spec.t_end, spec.record_every);

    if (const auto* rk4 = std::get_if<Rk4Fixed>(&spec.method)) {
        const double h0 = rk4->step;
        while (t < spec.t_end) {
            const double target = rec.next_target();
            while (t < target) {
                const double remaining = target - t;
                const bool lands = remaining <= h0 * (1.0 + 1e-12);
                const double h = lands ? remaining : h0;
                y = rk4_step(y, t, h, params, mode, mods, traj.stats);
                t = lands ? target : t + h;
                ++traj.stats.accepted;
                check_positivity(y, t);
            }
            rec.record(t, y);
        }
    } else {
        const auto& rk45 = std::get<Rk45Adaptive>(spec.method);
        const double span = spec.t_end - spec.t0;
        const double h_min = 1e-12 * span;
        double h_ctrl = std::min(span / 1000.0, rk45.max_step);
        double err_old = 1e-4;
        bool just_rejected = false;
        while (t < spec.t_end) {
            const double target = rec.next_target();
            while (t < target) {
                if (h_ctrl < h_min)
                    throw NumericError(
                        "stiffness failure: adaptive step collapsed below 1e-12 of the horizon at t = " +
                        std::to_string(t));
                const double remaining = target - t;
                const bool lands = h_ctrl >= remaining;
                const double h = lands ? remaining : h_ctrl;
                const Dp45Result step =
                    dp45_step(y, h, params, mode, mods, rk45.abs_tol, rk45.rel_tol, traj.stats);
                if (step.err <= 1.0) {
                    y = step.y_new;
                    t = lands ? target : t + h;
                    ++traj.stats.accepted;
                    check_positivity(y, t);
                    // PI controller (Hairer's DOPRI5 constants).
                    const double err = std::max(step.err, 1e-10);
                    double fac = 0.9 * std::pow(err, -0.17) * std::pow(err_old, 0.04);
                    fac = std::clamp(fac, 0.2, just_rejected ? 1.0 : 5.0);
                    h_ctrl = std::min(h * fac, rk45.max_step);
                    err_old = err;
                    just_rejected = false;
                } else {
                    ++traj.stats.rejected;
                    const double fac = std::max(0.2, 0.9 * std::pow(step.err, -0.2));
                    h_ctrl = h * fac;
                    just_rejected = true;
                }
            }
            rec.record(t, y);
        }
    }
    return traj;
}

double convergence_order(const StateVector& init, const ModelParameters& params,
                         const IncidenceMode& mode, double base_step)
{
    if (!(std::isfinite(base_step) && base_step > 0.0))
        throw ValidationError("convergence_order: base_step must be > 0");

    const double horizon = 128.0 * base_step;
    auto run = [&](double h) {
        IntegrationSpec spec;
        spec.t0 = 0.0;
        spec.t_end = horizon;
        spec.method = Rk4Fixed{h};
        spec.record_every = horizon;
        return integrate(init, params, mode, spec).states.back().to_array();
    };
    const auto y1 = run(base_step);
    const auto y2 = run(base_step / 2.0);
    const auto y4 = run(base_step / 4.0);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < kCompartments; ++i) {
        const double sc = 1.0 + std::abs(y4[i]);
        const double d12 = (y1[i] - y2[i]) / sc;
        const double d24 = (y2[i] - y4[i]) / sc;
        num += d12 * d12;
        den += d24 * d24;
    }
    if (den == 0.0)
        throw NumericError("convergence_order: refinement differences vanished");
    return 0.5 * std::log2(num / den);
}

} // namespace seirim
