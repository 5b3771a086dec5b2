#include "seirim/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "seirim/errors.hpp"
#include "seirim/parallel.hpp"

namespace seirim {

ModelParameters with_parameter(const ModelParameters& base, const std::string& name,
                               double value)
{
    ModelParameters out = base;
    if (name == "b1")
        out.b1 = value;
    else if (name == "beta")
        out.beta = value;
    else if (name == "mu_c")
        out.mu_c = value;
    else if (name == "gamma")
        out.gamma = value;
    else if (name == "d1")
        out.d1 = value;
    else if (name == "k")
        out.k = value;
    else if (name == "m")
        out.m = value;
    else if (name == "p")
        out.p = value;
    else
        throw ValidationError("unknown parameter name: " + name);
    return out;
}

void SweepSpec::validate() const
{
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
        throw ValidationError("sweep: interval must satisfy lo < hi");
    if (!(std::isfinite(step) && step > 0.0))
        throw ValidationError("sweep: step must be > 0");
    if (grid_values().size() < 2)
        throw ValidationError("sweep: interval must contain at least 2 grid points");
    base.validate();
    mode.validate();
    integration.validate();
    with_parameter(base, parameter, lo); // rejects unknown names
}

std::vector<double> SweepSpec::grid_values() const
{
    std::vector<double> values;
    const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
    values.reserve(static_cast<std::size_t>(count) + 1);
    for (std::int64_t i = 0; i <= count; ++i)
        values.push_back(lo + static_cast<double>(i) * step);
    return values;
}

const char* sensitivity_label(Sensitivity s)
{
    return s == Sensitivity::Sensitive ? "sensitive" : "insensitive";
}

namespace {

// Compensated accumulation; summing identical inputs gives identical sums
// regardless of how duplicates are ordered.
class KahanSum {
public:
    void add(double x)
    {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

} // namespace

SweepResult run_sweep(const SweepSpec& spec, int threads)
{
    spec.validate();
    return run_sweep_over(spec, spec.grid_values(), threads);
}

SweepResult run_sweep_over(const SweepSpec& spec, const std::vector<double>& values, int threads)
{
    spec.base.validate();
    spec.mode.validate();
    spec.integration.validate();
    if (values.size() < 2)
        throw ValidationError("sweep: need at least 2 grid values");

    SweepResult result;
    result.grid = values;
    const std::size_t n = result.grid.size();
    result.infected.resize(n);

    std::vector<std::vector<double>> times(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const double value = result.grid[i];
        try {
            const ModelParameters params = with_parameter(spec.base, spec.parameter, value);
            params.validate();
            const Trajectory traj = integrate(spec.init, params, spec.mode, spec.integration);
            times[i] = traj.times;
            auto& infected = result.infected[i];
            infected.reserve(traj.states.size());
            for (const auto& s : traj.states)
                infected.push_back(s.i_u + s.i_r);
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "sweep failed at " << spec.parameter << " = " << value << ": " << e.what();
            throw NumericError(msg.str());
        }
    });

    result.times = times.front();

    // Reduce in ascending-value order; duplicate values produce identical
    // trajectories, so the reduction is invariant under grid permutations.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return result.grid[a] < result.grid[b]; });

    const std::size_t samples = result.times.size();
    result.mean.resize(samples);
    result.mse.resize(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        double lo = result.infected[order.front()][j];
        double hi = lo;
        for (std::size_t idx : order) {
            lo = std::min(lo, result.infected[idx][j]);
            hi = std::max(hi, result.infected[idx][j]);
        }
        if (lo == hi) {
            // Constant sample: the mean is that value and the spread is zero,
            // exactly. This keeps decoupled-parameter sweeps at mse == 0
            // instead of leaving last-ulp residue from the division.
            result.mean[j] = lo;
            result.mse[j] = 0.0;
            continue;
        }
        KahanSum sum;
        for (std::size_t idx : order)
            sum.add(result.infected[idx][j]);
        // The mean of the sample must lie inside its range; compensated
        // summation can leave it an ulp outside.
        const double mean = std::clamp(sum.value() / static_cast<double>(n), lo, hi);
        KahanSum sq;
        for (std::size_t idx : order) {
            const double d = result.infected[idx][j] - mean;
            sq.add(d * d);
        }
        result.mean[j] = mean;
        result.mse[j] = sq.value() / static_cast<double>(n);
    }
    return result;
}

Sensitivity classify(const SweepResult& result, double peak_threshold, double tail_threshold)
{
    if (result.mse.empty())
        throw ValidationError("classify: empty sweep result");
    const double peak_mse = *std::max_element(result.mse.begin(), result.mse.end());
    const double peak_mean = *std::max_element(result.mean.begin(), result.mean.end());
    const double peak_relative = peak_mse / std::max(1.0, peak_mean * peak_mean);
    const bool sensitive = peak_relative > peak_threshold || result.mse.back() > tail_threshold;
    return sensitive ? Sensitivity::Sensitive : Sensitivity::Insensitive;
}

const std::vector<SweepInterval>& default_sweep_intervals()
{
    // Cleaned two-interval table. The published interval list left several
    // second-interval steps blank and one k interval malformed; entries
    // marked (hi-lo)/20 are this project's fill-ins, everything else is as
    // published.
    static const std::vector<SweepInterval> table = {
        {"b1", 1, 345.0, 355.0, 1.0},
        {"b1", 2, 355.0, 365.0, 1.0}, // step blank in the source, reused from interval 1
        {"m", 1, 0.0, 0.00182, 0.0001},
        {"m", 2, 0.00182, 0.1, 0.0001},
        {"beta", 1, 0.0, 0.00028, 0.0001},
        {"beta", 2, 0.00028, 0.1, (0.1 - 0.00028) / 20.0}, // step blank in the source
        {"k", 1, 0.0, 0.05, 0.01},
        {"k", 2, 0.2, 2.0, (2.0 - 0.2) / 20.0}, // source wrote the range without a step
        {"d1", 1, 0.0, 0.013, 0.001},
        {"d1", 2, 0.013, 0.5, 0.001},
        {"mu_c", 1, 0.1, 0.5, 0.001},
        {"mu_c", 2, 0.5, 1.0, (1.0 - 0.5) / 20.0}, // step blank in the source
        {"gamma", 1, 0.0, 0.0714, 0.001},
        {"gamma", 2, 0.0714, 1.0, (1.0 - 0.0714) / 20.0}, // step blank in the source
    };
    return table;
}

} // namespace seirim
