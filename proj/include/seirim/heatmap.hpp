#pragma once

// Two-parameter grids of the reproduction number with region classification:
// a cell is dfe_stable when R0 < 1 and endemic otherwise. Cells whose
// substituted parameters are invalid are marked degenerate and carry a NaN.

#include <string>
#include <vector>

#include "seirim/model.hpp"
#include "seirim/reproduction.hpp"

namespace seirim {

struct AxisSpec {
    std::string parameter;
    double lo = 0.0;
    double hi = 0.0;
    int count = 101;

    bool operator==(const AxisSpec&) const = default;
};

enum class WeightsConvention { DfeFractions, Explicit };

struct GridSpec {
    AxisSpec x;
    AxisSpec y;
    ModelParameters base;
    WeightsConvention weights = WeightsConvention::DfeFractions;
    DfeWeights explicit_weights; // used when weights == Explicit

    void validate() const;
};

enum class Region { DfeStable, Endemic, Degenerate };

const char* region_label(Region r);

struct HeatGrid {
    std::vector<double> x_values;
    std::vector<double> y_values;
    // Row-major over y then x: cell (ix, iy) lives at iy*x_values.size()+ix.
    std::vector<double> r0;
    std::vector<Region> region;

    std::size_t index(std::size_t ix, std::size_t iy) const { return iy * x_values.size() + ix; }
};

// R0 per cell via the numeric spectral radius of the next-generation block.
// Throws NumericError when every cell is degenerate.
HeatGrid compute_grid(const GridSpec& spec, int threads = 1);

} // namespace seirim
