#pragma once

// Seeded parameter and state samplers shared by the CLI selfcheck and the
// acceptance suite: rates log-uniform over [1e-4, 1], p uniform over [0, 1].

#include "seirim/model.hpp"
#include "seirim/rng.hpp"

namespace seirim {

ModelParameters random_parameters(Rng& rng);

// Components uniform over [0, scale].
StateVector random_nonnegative_state(Rng& rng, double scale);

// Random parameters rescaled in beta so the numeric spectral radius of the
// next-generation block (disease-free-fraction weights) equals r0_target.
ModelParameters constructed_r0_draw(Rng& rng, double r0_target);

} // namespace seirim
