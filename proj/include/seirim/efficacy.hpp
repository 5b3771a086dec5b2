#pragma once

namespace seirim {

// Efficacies of the three interventions, split by population:
//   eps11/eps12  vaccination (urban/rural), scales incubation k by (1-eps)
//   eps21/eps22  antiviral drugs, scales recovery gamma by (1+eps)
//   eps31/eps32  immunotherapy, scales recovery gamma by (1+eps)
// All values live in [0, 1).
struct EfficacyCombination {
    double eps11 = 0.0;
    double eps12 = 0.0;
    double eps21 = 0.0;
    double eps22 = 0.0;
    double eps31 = 0.0;
    double eps32 = 0.0;

    static EfficacyCombination zero() { return {}; }

    void validate() const;

    bool operator==(const EfficacyCombination&) const = default;
};

} // namespace seirim
