#include <doctest.h>

#include <limits>

#include "seirim/draws.hpp"
#include "seirim/errors.hpp"
#include "seirim/model.hpp"
#include "seirim/rng.hpp"
#include "test_support.hpp"

using namespace seirim;
using test::base_params;
using test::rel_close;

TEST_CASE("rhs at the origin is pure birth inflow")
{
    const auto d = rhs(StateVector{}, base_params(), IncidenceMode::dynamic());
    CHECK(d.s_u == base_params().b1);
    for (int i = 1; i < kCompartments; ++i)
        CHECK(d[i] == 0.0);
}

TEST_CASE("rhs worked example: lone susceptible urban block")
{
    StateVector state;
    state.s_u = 100.0;
    const auto d = rhs(state, base_params(), IncidenceMode::dynamic());
    // Hand-evaluated: 350 - (0.0062 + 0.000182)*100 and 0.5*0.000182*100.
    CHECK(rel_close(d.s_u, 349.3618, 1e-12));
    CHECK(rel_close(d.q_r, 0.0091, 1e-12));
    CHECK(rel_close(d.s_r, 0.0091, 1e-12));
    CHECK(d.e_u == 0.0);
    CHECK(d.i_u == 0.0);
    CHECK(d.r_u == 0.0);
    CHECK(d.e_r == 0.0);
    CHECK(d.i_r == 0.0);
    CHECK(d.r_r == 0.0);
}

TEST_CASE("boundary inflow worked examples")
{
    SUBCASE("exposed boundary sees positive incidence")
    {
        StateVector state;
        state.s_u = 200.0;
        state.i_u = 30.0;
        const auto checks = boundary_inflow_check(state, base_params(), IncidenceMode::dynamic());
        for (const auto& [index, value] : checks) {
            if (index == 1) { // E_u
                const double n = total_population(state);
                CHECK(value == doctest::Approx(0.00028 * 200.0 * 30.0 / n).epsilon(1e-14));
                CHECK(value > 0.0);
            }
        }
    }
    SUBCASE("empty urban side leaves the quarantine boundary flat")
    {
        StateVector state;
        state.s_r = 40.0;
        const auto checks = boundary_inflow_check(state, base_params(), IncidenceMode::dynamic());
        for (const auto& [index, value] : checks)
            if (index == 4) // Q_r
                CHECK(value == 0.0);
    }
    SUBCASE("recovered boundary equals gamma * I_r")
    {
        StateVector state;
        state.i_r = 5.0;
        state.s_u = 1.0;
        const auto checks = boundary_inflow_check(state, base_params(), IncidenceMode::dynamic());
        bool seen = false;
        for (const auto& [index, value] : checks)
            if (index == 8) { // R_r
                seen = true;
                CHECK(rel_close(value, 0.357, 1e-12));
            }
        CHECK(seen);
    }
}

TEST_CASE("boundary non-negativity over random states")
{
    Rng rng(71);
    for (int draw = 0; draw < 200; ++draw) {
        const ModelParameters params = random_parameters(rng);
        StateVector state = random_nonnegative_state(rng, 500.0);
        for (int i = 0; i < kCompartments; ++i)
            if (rng.uniform01() < 0.5)
                state[i] = 0.0;
        for (const IncidenceMode& mode :
             {IncidenceMode::dynamic(), IncidenceMode::fixed(750.0)}) {
            for (const auto& [index, value] : boundary_inflow_check(state, params, mode)) {
                INFO("compartment ", compartment_label(index));
                CHECK(value >= 0.0);
            }
        }
    }
}

TEST_CASE("total population sums the nine compartments")
{
    CHECK(total_population(StateVector{}) == 0.0);
    CHECK(total_population(StateVector{1, 1, 1, 1, 1, 1, 1, 1, 1}) == 9.0);
    CHECK(total_population(test::base_init()) == 520.0);
}

TEST_CASE("population growth obeys dN/dt <= b1 - min(mu_c, d1) N")
{
    Rng rng(72);
    for (int draw = 0; draw < 1000; ++draw) {
        const ModelParameters params = random_parameters(rng);
        const StateVector state = random_nonnegative_state(rng, 1000.0);
        const auto d = rhs(state, params, IncidenceMode::dynamic());
        double dn = 0.0;
        for (int i = 0; i < kCompartments; ++i)
            dn += d[i];
        const double bound =
            params.b1 - std::min(params.mu_c, params.d1) * total_population(state);
        CHECK(dn <= bound + 1e-9 * (1.0 + std::abs(bound)));
    }
}

TEST_CASE("rhs is deterministic")
{
    const StateVector state = test::base_init();
    const auto a = rhs(state, base_params(), IncidenceMode::dynamic());
    const auto b = rhs(state, base_params(), IncidenceMode::dynamic());
    CHECK(a == b);
}

TEST_CASE("rhs error paths")
{
    SUBCASE("non-finite state")
    {
        StateVector state;
        state.e_u = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(rhs(state, base_params(), IncidenceMode::dynamic()), ValidationError);
    }
    SUBCASE("invalid parameters")
    {
        ModelParameters params = base_params();
        params.beta = -1.0;
        CHECK_THROWS_AS(rhs(StateVector{}, params, IncidenceMode::dynamic()), ValidationError);
    }
    SUBCASE("zero live population with active incidence")
    {
        StateVector state;
        state.s_u = 1.0;
        state.i_u = 1.0;
        state.e_u = -2.0; // unphysical, but makes N = 0 while S*I > 0
        CHECK_THROWS_AS(rhs(state, base_params(), IncidenceMode::dynamic()), NumericError);
    }
    SUBCASE("fixed mode requires positive population")
    {
        CHECK_THROWS_AS(rhs(StateVector{}, base_params(), IncidenceMode::fixed(0.0)),
                        ValidationError);
    }
}

TEST_CASE("rate modifiers scale the urban and rural flows independently")
{
    StateVector state = test::base_init();
    const auto plain = rhs(state, base_params(), IncidenceMode::dynamic());
    const auto same = rhs(state, base_params(), IncidenceMode::dynamic(), RateModifiers{});
    CHECK(plain == same);

    RateModifiers mods;
    mods.gamma_u = 2.0;
    const auto boosted = rhs(state, base_params(), IncidenceMode::dynamic(), mods);
    CHECK(boosted.r_u == doctest::Approx(2.0 * 0.0714 * state.i_u - 0.0062 * state.r_u));
    CHECK(boosted.r_r == plain.r_r); // rural side untouched
}
