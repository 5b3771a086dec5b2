#include "seirim/heatmap.hpp"

#include <cmath>
#include <limits>

#include "seirim/errors.hpp"
#include "seirim/parallel.hpp"
#include "seirim/sensitivity.hpp"

namespace seirim {

const char* region_label(Region r)
{
    switch (r) {
    case Region::DfeStable: return "dfe_stable";
    case Region::Endemic: return "endemic";
    case Region::Degenerate: return "degenerate";
    }
    return "?";
}

void GridSpec::validate() const
{
    base.validate();
    for (const AxisSpec* axis : {&x, &y}) {
        if (axis->count < 2)
            throw ValidationError("grid: axis count must be >= 2");
        if (!(std::isfinite(axis->lo) && std::isfinite(axis->hi) && axis->lo < axis->hi))
            throw ValidationError("grid: axis range must satisfy lo < hi");
        with_parameter(base, axis->parameter, axis->lo); // rejects unknown names
    }
    if (weights == WeightsConvention::Explicit)
        explicit_weights.validate();
}

namespace {

std::vector<double> linspace(const AxisSpec& axis)
{
    std::vector<double> v(static_cast<std::size_t>(axis.count));
    const double span = axis.hi - axis.lo;
    for (int i = 0; i < axis.count; ++i)
        v[static_cast<std::size_t>(i)] =
            axis.lo + span * static_cast<double>(i) / static_cast<double>(axis.count - 1);
    v.back() = axis.hi;
    return v;
}

} // namespace

HeatGrid compute_grid(const GridSpec& spec, int threads)
{
    spec.validate();

    HeatGrid grid;
    grid.x_values = linspace(spec.x);
    grid.y_values = linspace(spec.y);
    const std::size_t nx = grid.x_values.size();
    const std::size_t ny = grid.y_values.size();
    grid.r0.assign(nx * ny, std::numeric_limits<double>::quiet_NaN());
    grid.region.assign(nx * ny, Region::Degenerate);

    parallel_for(nx * ny, threads, [&](std::size_t cell) {
        const std::size_t ix = cell % nx;
        const std::size_t iy = cell / nx;
        try {
            ModelParameters params =
                with_parameter(spec.base, spec.x.parameter, grid.x_values[ix]);
            params = with_parameter(params, spec.y.parameter, grid.y_values[iy]);
            params.validate();
            const DfeWeights weights = spec.weights == WeightsConvention::DfeFractions
                                           ? dfe_weights_from_equilibrium(params)
                                           : spec.explicit_weights;
            const auto decomp = next_generation(params, weights);
            const double r0 = spectral_radius(decomp.k_matrix);
            grid.r0[cell] = r0;
            grid.region[cell] = r0 < 1.0 ? Region::DfeStable : Region::Endemic;
        } catch (const Error&) {
            // degenerate cell, already marked
        }
    });

    bool any_valid = false;
    for (Region r : grid.region)
        if (r != Region::Degenerate)
            any_valid = true;
    if (!any_valid)
        throw NumericError("heat grid: every cell has degenerate parameters");
    return grid;
}

} // namespace seirim
