#include <doctest.h>

#include <cmath>
#include <sstream>

#include "seirim/errors.hpp"
#include "seirim/heatmap.hpp"
#include "seirim/io.hpp"
#include "test_support.hpp"

using namespace seirim;
using test::base_params;

namespace {

GridSpec make_spec(const std::string& xp, double xlo, double xhi, int xn, const std::string& yp,
                   double ylo, double yhi, int yn)
{
    GridSpec spec;
    spec.x = AxisSpec{xp, xlo, xhi, xn};
    spec.y = AxisSpec{yp, ylo, yhi, yn};
    spec.base = base_params();
    return spec;
}

} // namespace

TEST_CASE("zero-transmission column is all dfe_stable with r0 = 0")
{
    const GridSpec spec = make_spec("beta", 0.0, 0.001, 3, "m", 0.0, 0.001, 2);
    const HeatGrid grid = compute_grid(spec);
    for (std::size_t iy = 0; iy < grid.y_values.size(); ++iy) {
        const std::size_t cell = grid.index(0, iy);
        CHECK(grid.r0[cell] == 0.0);
        CHECK(grid.region[cell] == Region::DfeStable);
    }
}

TEST_CASE("r0 falls monotonically along the death-rate axis")
{
    const GridSpec spec = make_spec("mu_c", 0.1, 1.0, 11, "k", 0.0, 2.0, 11);
    const HeatGrid grid = compute_grid(spec, 2);
    for (std::size_t iy = 0; iy < grid.y_values.size(); ++iy)
        for (std::size_t ix = 1; ix < grid.x_values.size(); ++ix) {
            const double prev = grid.r0[grid.index(ix - 1, iy)];
            const double curr = grid.r0[grid.index(ix, iy)];
            CHECK(curr <= prev * (1.0 + 1e-12));
        }
}

TEST_CASE("r0 is linear in the transmission rate")
{
    GridSpec spec = make_spec("beta", 0.05, 0.1, 2, "m", 0.0, 0.001, 2);
    const HeatGrid grid = compute_grid(spec);
    for (std::size_t iy = 0; iy < grid.y_values.size(); ++iy) {
        const double lo = grid.r0[grid.index(0, iy)];
        const double hi = grid.r0[grid.index(1, iy)];
        CHECK(std::abs(hi / lo - 2.0) < 1e-12);
    }

    // Closed form: doubling beta doubles r0 exactly.
    const DfeWeights weights = dfe_weights_from_equilibrium(base_params());
    ModelParameters doubled = base_params();
    doubled.beta = 2.0 * base_params().beta;
    CHECK(r0_closed_form(doubled, weights).value ==
          2.0 * r0_closed_form(base_params(), weights).value);
}

TEST_CASE("region flips only where r0 crosses one")
{
    const GridSpec spec = make_spec("beta", 0.0, 0.6, 21, "mu_c", 0.1, 1.0, 9);
    const HeatGrid grid = compute_grid(spec, 2);
    bool any_endemic = false, any_stable = false;
    for (std::size_t iy = 0; iy < grid.y_values.size(); ++iy)
        for (std::size_t ix = 0; ix + 1 < grid.x_values.size(); ++ix) {
            const std::size_t a = grid.index(ix, iy);
            const std::size_t b = grid.index(ix + 1, iy);
            any_endemic = any_endemic || grid.region[a] == Region::Endemic;
            any_stable = any_stable || grid.region[a] == Region::DfeStable;
            if (grid.region[a] != grid.region[b])
                CHECK((grid.r0[a] - 1.0) * (grid.r0[b] - 1.0) <= 0.0);
            else if (grid.region[a] == Region::DfeStable)
                CHECK((grid.r0[a] < 1.0 && grid.r0[b] < 1.0));
        }
    CHECK(any_endemic);
    CHECK(any_stable);
}

TEST_CASE("degenerate cells are sentinels, not poison")
{
    // mu_c = 0 is invalid; that column must come back degenerate with NaN.
    const GridSpec spec = make_spec("mu_c", 0.0, 0.5, 2, "k", 0.1, 0.2, 2);
    const HeatGrid grid = compute_grid(spec);
    for (std::size_t iy = 0; iy < grid.y_values.size(); ++iy) {
        CHECK(grid.region[grid.index(0, iy)] == Region::Degenerate);
        CHECK(std::isnan(grid.r0[grid.index(0, iy)]));
        CHECK(grid.region[grid.index(1, iy)] != Region::Degenerate);
    }
}

TEST_CASE("an all-degenerate grid is an error")
{
    GridSpec spec = make_spec("mu_c", -1.0, 0.0, 3, "k", 0.1, 0.2, 2);
    CHECK_THROWS_AS(compute_grid(spec), NumericError);
}

TEST_CASE("explicit weight conventions are honored")
{
    GridSpec spec = make_spec("beta", 0.01, 0.02, 2, "m", 0.0, 0.001, 2);
    spec.weights = WeightsConvention::Explicit;
    spec.explicit_weights = DfeWeights{1.0, 0.0};
    const HeatGrid grid = compute_grid(spec);
    ModelParameters params = base_params();
    params.beta = 0.01;
    params.m = 0.0;
    CHECK(grid.r0[grid.index(0, 0)] ==
          doctest::Approx(r0_closed_form(params, DfeWeights{1.0, 0.0}).value).epsilon(1e-12));
}

TEST_CASE("grid export formats")
{
    HeatGrid grid;
    grid.x_values = {1.0, 2.0};
    grid.y_values = {10.0};
    grid.r0 = {0.5, 1.5};
    grid.region = {Region::DfeStable, Region::Endemic};

    std::ostringstream long_form;
    write_heatgrid_long(long_form, grid);
    CHECK(long_form.str() == "x,y,r0,region\n"
                             "1,10,0.5,dfe_stable\n"
                             "2,10,1.5,endemic\n");

    std::ostringstream matrix_form;
    write_heatgrid_matrix(matrix_form, grid);
    CHECK(matrix_form.str() == "x,1,2\n"
                               "10,0.5,1.5\n");
}

TEST_CASE("thread count does not change the grid")
{
    const GridSpec spec = make_spec("beta", 0.0, 0.1, 7, "mu_c", 0.1, 0.9, 5);
    const HeatGrid serial = compute_grid(spec, 1);
    const HeatGrid parallel = compute_grid(spec, 4);
    CHECK(serial.r0 == parallel.r0);
    CHECK(serial.region == parallel.region);
}
