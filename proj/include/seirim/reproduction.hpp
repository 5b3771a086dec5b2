#pragma once

// Next-generation matrices at the disease-free equilibrium and the basic
// reproduction number, closed form and numeric. Infected states are ordered
// (E_u, E_r, I_u, I_r).

#include <Eigen/Dense>

#include "seirim/efficacy.hpp"
#include "seirim/model.hpp"

namespace seirim {

// Susceptible fractions entering the linearized incidence terms:
// p1 = S_u*/N*, p2 = S_r*/N* at the disease-free equilibrium, or any
// explicit convention in [0, 1].
struct DfeWeights {
    double p1 = 1.0;
    double p2 = 0.0;

    void validate() const;

    bool operator==(const DfeWeights&) const = default;
};

struct NextGenDecomposition {
    Eigen::Matrix4d t_matrix;      // new-infection terms
    Eigen::Matrix4d sigma_matrix;  // transition terms
    Eigen::Matrix4d sigma_inverse; // closed-form inverse of sigma
    Eigen::Matrix2d k_matrix;      // -T*Sigma^-1 projected onto the E rows/columns
};

// Builds T and Sigma for the infected subsystem linearized at the DFE.
// Throws NumericError when Sigma is singular.
NextGenDecomposition next_generation(const ModelParameters& params, const DfeWeights& weights);

// Power iteration (1e-14 relative convergence) for the dominant eigenvalue
// of the nonnegative 2x2 block; falls back to the characteristic-polynomial
// eigenvalues if the two Perron candidates are too close for the iteration
// to separate.
double spectral_radius(const Eigen::Matrix2d& m);

struct R0Result {
    double value = 0.0;      // max of the two diagonal terms
    double urban_term = 0.0; // beta p1 k / ((gamma+mu_c)(k+m+mu_c))
    double rural_term = 0.0; // beta p2 k / ((gamma+mu_c)(k+mu_c))
    bool urban_dominant = true;
};

// Closed-form R0. The urban term is the usual headline expression; when the
// rural diagonal entry dominates instead, value still reports the true
// spectral radius and urban_dominant flags the situation.
R0Result r0_closed_form(const ModelParameters& params, const DfeWeights& weights);

// Weights from the disease-free susceptible fractions.
DfeWeights dfe_weights_from_equilibrium(const ModelParameters& params);

// Reproduction number with interventions applied: vaccination scales the
// incubation inflow by (1-eps11)(1-eps12), antivirals and immunotherapy
// scale recovery by (1+eps21)(1+eps22)(1+eps31)(1+eps32). All efficacies
// zero reproduces the urban closed-form R0 bit-exactly.
double effective_r0(const ModelParameters& params, const DfeWeights& weights,
                    const EfficacyCombination& eff);

} // namespace seirim
