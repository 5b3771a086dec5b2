#include <doctest.h>

#include <algorithm>
#include <random>

#include "seirim/errors.hpp"
#include "seirim/sensitivity.hpp"
#include "test_support.hpp"

using namespace seirim;
using test::base_init;
using test::base_params;

namespace {

SweepSpec quick_spec(const std::string& parameter, double lo, double hi, double step,
                     double t_end = 100.0)
{
    SweepSpec spec;
    spec.parameter = parameter;
    spec.lo = lo;
    spec.hi = hi;
    spec.step = step;
    spec.base = base_params();
    spec.init = base_init();
    spec.mode = IncidenceMode::dynamic();
    spec.integration.t_end = t_end;
    spec.integration.method = Rk4Fixed{0.1};
    spec.integration.record_every = 1.0;
    return spec;
}

} // namespace

TEST_CASE("with_parameter substitutes by name and rejects strangers")
{
    const ModelParameters base = base_params();
    CHECK(with_parameter(base, "beta", 0.5).beta == 0.5);
    CHECK(with_parameter(base, "mu_c", 0.5).mu_c == 0.5);
    CHECK(with_parameter(base, "p", 0.25).p == 0.25);
    CHECK_THROWS_AS(with_parameter(base, "alpha", 1.0), ValidationError);
}

TEST_CASE("grid generation")
{
    const SweepSpec spec = quick_spec("mu_c", 0.1, 0.5, 0.1);
    const auto grid = spec.grid_values();
    REQUIRE(grid.size() == 5);
    CHECK(grid.front() == 0.1);
    CHECK(grid.back() == doctest::Approx(0.5));

    SweepSpec bad = spec;
    bad.step = 1.0; // only one point fits
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("duplicate grid values give identical columns and zero mse")
{
    const SweepSpec spec = quick_spec("mu_c", 0.1, 0.5, 0.1, 50.0);
    const SweepResult result = run_sweep_over(spec, {0.2, 0.2});
    for (std::size_t j = 0; j < result.times.size(); ++j) {
        CHECK(result.infected[0][j] == result.infected[1][j]);
        CHECK(result.mean[j] == result.infected[0][j]);
        CHECK(result.mse[j] == 0.0);
    }
    CHECK(classify(result) == Sensitivity::Insensitive);
}

TEST_CASE("quarantine death rate is inert under a fixed incidence population")
{
    // d1 only drives the quarantine compartment, which feeds nothing; with N
    // held fixed the other eight compartments never see it.
    SweepSpec spec = quick_spec("d1", 0.0, 0.013, 0.0065, 50.0);
    spec.mode = IncidenceMode::fixed(520.0);
    const SweepResult result = run_sweep(spec);
    REQUIRE(result.grid.size() == 3);
    for (double v : result.mse)
        CHECK(v == 0.0);
    CHECK(classify(result) == Sensitivity::Insensitive);
}

TEST_CASE("death-rate sweep: mse rises from zero and settles back")
{
    const SweepSpec spec = quick_spec("mu_c", 0.1, 0.5, 0.05, 300.0);
    const SweepResult result = run_sweep(spec, 2);
    CHECK(result.mse.front() == 0.0); // shared initial state
    const double peak = *std::max_element(result.mse.begin(), result.mse.end());
    CHECK(peak > 0.0);
    CHECK(result.mse.back() < 1e-3 * peak);
}

TEST_CASE("reduction is invariant under grid permutations and thread counts")
{
    const SweepSpec spec = quick_spec("gamma", 0.01, 0.07, 0.01, 50.0);
    const SweepResult sorted = run_sweep(spec, 1);

    auto values = spec.grid_values();
    std::shuffle(values.begin(), values.end(), std::mt19937(7));
    const SweepResult shuffled = run_sweep_over(spec, values, 3);

    CHECK(sorted.mean == shuffled.mean);
    CHECK(sorted.mse == shuffled.mse);
    CHECK(classify(sorted) == classify(shuffled));

    const SweepResult threaded = run_sweep(spec, 4);
    CHECK(sorted.mean == threaded.mean);
    CHECK(sorted.mse == threaded.mse);
}

TEST_CASE("mse agrees with the second-moment route")
{
    const SweepSpec spec = quick_spec("k", 0.0, 0.05, 0.01, 80.0);
    const SweepResult result = run_sweep(spec, 2);
    for (std::size_t j = 0; j < result.times.size(); ++j) {
        double second = 0.0;
        for (std::size_t n = 0; n < result.grid.size(); ++n)
            second += result.infected[n][j] * result.infected[n][j];
        second /= static_cast<double>(result.grid.size());
        const double alt = second - result.mean[j] * result.mean[j];
        CHECK(std::abs(alt - result.mse[j]) <= 1e-9 * (1.0 + result.mse[j]));
    }
}

TEST_CASE("per-sample mean and mse stay inside their defining bounds")
{
    const SweepSpec spec = quick_spec("mu_c", 0.1, 0.5, 0.05, 120.0);
    const SweepResult result = run_sweep(spec, 2);
    for (std::size_t j = 0; j < result.times.size(); ++j) {
        double lo = result.infected[0][j], hi = lo;
        for (std::size_t n = 1; n < result.grid.size(); ++n) {
            lo = std::min(lo, result.infected[n][j]);
            hi = std::max(hi, result.infected[n][j]);
        }
        CHECK(result.mean[j] >= lo);
        CHECK(result.mean[j] <= hi);
        CHECK(result.mse[j] >= 0.0);
    }
}

TEST_CASE("classification thresholds")
{
    SweepResult synthetic;
    synthetic.grid = {1.0, 2.0};
    synthetic.times = {0.0, 1.0, 2.0};
    synthetic.infected = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
    synthetic.mean = {10.0, 20.0, 10.0};
    synthetic.mse = {0.0, 3.0, 0.0};
    // peak relative = 3 / max(1, 400) = 0.0075
    CHECK(classify(synthetic, 0.01, 1e-4) == Sensitivity::Insensitive);
    CHECK(classify(synthetic, 0.005, 1e-4) == Sensitivity::Sensitive);
    synthetic.mse.back() = 2e-4; // tail trigger
    CHECK(classify(synthetic, 0.01, 1e-4) == Sensitivity::Sensitive);
    CHECK(classify(synthetic, 0.01, 1e-3) == Sensitivity::Insensitive);
}

TEST_CASE("a failing grid point names itself")
{
    SweepSpec spec = quick_spec("beta", -0.2, 0.2, 0.2, 10.0);
    try {
        run_sweep(spec);
        FAIL("expected the negative beta grid point to fail");
    } catch (const NumericError& e) {
        const std::string message = e.what();
        CHECK(message.find("beta") != std::string::npos);
        CHECK(message.find("-0.2") != std::string::npos);
    }
}

TEST_CASE("default interval table is well formed")
{
    const auto& table = default_sweep_intervals();
    CHECK(table.size() == 14);
    for (const auto& iv : table) {
        CHECK(iv.lo < iv.hi);
        CHECK(iv.step > 0.0);
        CHECK((iv.interval_index == 1 || iv.interval_index == 2));
        SweepSpec spec = quick_spec(iv.parameter, iv.lo, iv.hi, iv.step);
        CHECK(spec.grid_values().size() >= 2);
    }
}
