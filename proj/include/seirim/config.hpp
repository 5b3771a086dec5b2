#pragma once

// Run configuration: flat structured text, `key = value` lines grouped under
// [section] headers, `#` comments. Unknown sections or keys are rejected and
// parse -> serialize -> parse is the identity on the parsed structure.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "seirim/efficacy.hpp"
#include "seirim/heatmap.hpp"
#include "seirim/integrate.hpp"
#include "seirim/model.hpp"

namespace seirim {

struct SweepConfig {
    std::string parameter;
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
    double peak_threshold = 0.01;
    double tail_threshold = 1e-4;

    bool operator==(const SweepConfig&) const = default;
};

struct GridConfig {
    AxisSpec x;
    AxisSpec y;
    WeightsConvention weights = WeightsConvention::DfeFractions;
    DfeWeights explicit_weights;

    bool operator==(const GridConfig&) const = default;
};

struct EffectivenessConfig {
    EfficacyCombination combo;
    bool apply_to_dynamics = false;
    std::string combos_file; // empty = built-in combination table

    bool operator==(const EffectivenessConfig&) const = default;
};

struct RunConfig {
    ModelParameters params;
    IncidenceMode mode;
    StateVector init;
    IntegrationSpec integration;

    std::uint64_t seed = 42;
    int threads = 0; // 0 = hardware default

    std::optional<SweepConfig> sweep;
    std::optional<GridConfig> grid;
    std::optional<EfficacyCombination> r0_efficacies;
    std::optional<EffectivenessConfig> effectiveness;

    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& config);

} // namespace seirim
