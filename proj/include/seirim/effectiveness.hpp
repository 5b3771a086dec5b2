#pragma once

// Comparative effectiveness of intervention combinations: percentage
// reduction of the reproduction number and the resulting CE ranking.

#include <filesystem>
#include <vector>

#include "seirim/efficacy.hpp"
#include "seirim/model.hpp"
#include "seirim/reproduction.hpp"

namespace seirim {

struct EffectivenessRow {
    int id = 0; // 1-based position in the input combination list
    EfficacyCombination combo;
    double r_e = 0.0;
    double pr = 0.0;  // percent reduction, 100*(r0 - r_e)/r0
    int ce_rank = 0;  // 1 = smallest reduction
};

// The built-in study table: 17 combinations mixing low (0.3), medium (0.6)
// and high (0.9) efficacies, row 1 all zeros.
std::vector<EfficacyCombination> builtin_combinations();

// Custom combination table: header `eps11,eps12,eps21,eps22,eps31,eps32`,
// one row of six comma-separated values per combination, `#` comments and
// blank lines ignored.
std::vector<EfficacyCombination> load_combinations(const std::filesystem::path& path);

// Scores every combination against the zero-efficacy baseline. Ranks are
// assigned in ascending order of pr with ties broken by lower id.
// Throws NumericError when the baseline reproduction number is zero.
std::vector<EffectivenessRow> effectiveness_table(const ModelParameters& params,
                                                  const DfeWeights& weights,
                                                  const std::vector<EfficacyCombination>& combos);

// Per-population rate scalings for simulating a combination instead of just
// scoring it.
RateModifiers rate_modifiers(const EfficacyCombination& eff);

} // namespace seirim
