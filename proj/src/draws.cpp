#include "seirim/draws.hpp"

#include "seirim/errors.hpp"
#include "seirim/reproduction.hpp"

namespace seirim {

ModelParameters random_parameters(Rng& rng)
{
    ModelParameters params;
    params.b1 = rng.log_uniform(1e-4, 1.0);
    params.beta = rng.log_uniform(1e-4, 1.0);
    params.mu_c = rng.log_uniform(1e-4, 1.0);
    params.gamma = rng.log_uniform(1e-4, 1.0);
    params.d1 = rng.log_uniform(1e-4, 1.0);
    params.k = rng.log_uniform(1e-4, 1.0);
    params.m = rng.log_uniform(1e-4, 1.0);
    params.p = rng.uniform01();
    return params;
}

StateVector random_nonnegative_state(Rng& rng, double scale)
{
    StateVector s;
    for (int i = 0; i < kCompartments; ++i)
        s[i] = rng.uniform(0.0, scale);
    return s;
}

ModelParameters constructed_r0_draw(Rng& rng, double r0_target)
{
    ModelParameters params = random_parameters(rng);
    params.beta = 1.0;
    const DfeWeights weights = dfe_weights_from_equilibrium(params);
    const double r0_unit = spectral_radius(next_generation(params, weights).k_matrix);
    if (!(r0_unit > 0.0))
        throw NumericError("constructed_r0_draw: zero spectral radius at unit beta");
    params.beta = r0_target / r0_unit;
    return params;
}

} // namespace seirim
