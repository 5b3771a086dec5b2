#include "seirim/reproduction.hpp"

#include <cmath>

#include "seirim/equilibria.hpp"
#include "seirim/errors.hpp"

namespace seirim {

void DfeWeights::validate() const
{
    if (!(std::isfinite(p1) && p1 >= 0.0 && p1 <= 1.0))
        throw ValidationError("weights: p1 must be in [0,1]");
    if (!(std::isfinite(p2) && p2 >= 0.0 && p2 <= 1.0))
        throw ValidationError("weights: p2 must be in [0,1]");
}

void EfficacyCombination::validate() const
{
    for (double e : {eps11, eps12, eps21, eps22, eps31, eps32})
        if (!(std::isfinite(e) && e >= 0.0 && e < 1.0))
            throw ValidationError("efficacies must lie in [0,1)");
}

NextGenDecomposition next_generation(const ModelParameters& params, const DfeWeights& weights)
{
    params.validate();
    weights.validate();

    const double out_eu = params.k + params.m + params.mu_c; // E_u outflow
    const double out_er = params.k + params.mu_c;            // E_r outflow
    const double out_i = params.gamma + params.mu_c;         // I outflow, both populations
    if (!(out_eu > 0.0) || !(out_er > 0.0) || !(out_i > 0.0))
        throw NumericError("degenerate parameters: singular transition matrix");

    NextGenDecomposition d;
    d.t_matrix.setZero();
    d.t_matrix(0, 2) = weights.p1 * params.beta;
    d.t_matrix(1, 3) = weights.p2 * params.beta;

    const double inflow = (1.0 - params.p) * params.m; // exposed migration E_u -> E_r
    d.sigma_matrix.setZero();
    d.sigma_matrix(0, 0) = -out_eu;
    d.sigma_matrix(1, 0) = inflow;
    d.sigma_matrix(1, 1) = -out_er;
    d.sigma_matrix(2, 0) = params.k;
    d.sigma_matrix(2, 2) = -out_i;
    d.sigma_matrix(3, 1) = params.k;
    d.sigma_matrix(3, 3) = -out_i;

    // Closed-form inverse of the lower-triangular Sigma.
    d.sigma_inverse.setZero();
    d.sigma_inverse(0, 0) = -1.0 / out_eu;
    d.sigma_inverse(1, 0) = -inflow / (out_eu * out_er);
    d.sigma_inverse(1, 1) = -1.0 / out_er;
    d.sigma_inverse(2, 0) = -params.k / (out_eu * out_i);
    d.sigma_inverse(2, 2) = -1.0 / out_i;
    d.sigma_inverse(3, 0) = -params.k * inflow / (out_eu * out_er * out_i);
    d.sigma_inverse(3, 1) = -params.k / (out_er * out_i);
    d.sigma_inverse(3, 3) = -1.0 / out_i;

    const Eigen::Matrix4d ngm = -d.t_matrix * d.sigma_inverse;
    d.k_matrix = ngm.topLeftCorner<2, 2>();
    return d;
}

double spectral_radius(const Eigen::Matrix2d& m)
{
    if (m.norm() == 0.0)
        return 0.0;
    Eigen::Vector2d v(1.0, 1.0);
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 100000; ++it) {
        const Eigen::Vector2d w = m * v;
        const double norm = w.norm();
        if (norm == 0.0)
            return 0.0;
        const double next = norm;
        v = w / norm;
        if (std::abs(next - lambda) <= 1e-14 * std::max(1.0, std::abs(next)))
            return next;
        lambda = next;
    }
    // Near-tied eigenvalues separate too slowly; use the characteristic
    // polynomial instead.
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double disc = std::max(0.0, tr * tr - 4.0 * det);
    const double sq = std::sqrt(disc);
    return std::max(std::abs(0.5 * (tr + sq)), std::abs(0.5 * (tr - sq)));
}

namespace {

double urban_r0_term(const ModelParameters& params, double p1, const EfficacyCombination& eff)
{
    const double k_eff = params.k * (1.0 - eff.eps11) * (1.0 - eff.eps12);
    const double gamma_eff = params.gamma * (1.0 + eff.eps21) * (1.0 + eff.eps22) *
                             (1.0 + eff.eps31) * (1.0 + eff.eps32);
    const double denom = (gamma_eff + params.mu_c) * (k_eff + params.m + params.mu_c);
    if (!(denom > 0.0))
        throw NumericError("degenerate parameters: zero denominator in reproduction number");
    return params.beta * p1 * k_eff / denom;
}

} // namespace

R0Result r0_closed_form(const ModelParameters& params, const DfeWeights& weights)
{
    params.validate();
    weights.validate();
    const double out_er = params.k + params.mu_c;
    const double out_i = params.gamma + params.mu_c;
    if (!(out_er > 0.0) || !(out_i > 0.0))
        throw NumericError("degenerate parameters: zero denominator in reproduction number");

    R0Result r;
    r.urban_term = urban_r0_term(params, weights.p1, EfficacyCombination::zero());
    r.rural_term = params.beta * weights.p2 * params.k / (out_i * out_er);
    r.urban_dominant = r.urban_term >= r.rural_term;
    r.value = r.urban_dominant ? r.urban_term : r.rural_term;
    return r;
}

DfeWeights dfe_weights_from_equilibrium(const ModelParameters& params)
{
    const auto dfe = disease_free_equilibrium(params);
    const double n = total_population(dfe.state);
    if (!(n > 0.0))
        throw NumericError("degenerate parameters: empty disease-free population");
    return DfeWeights{dfe.state.s_u / n, dfe.state.s_r / n};
}

double effective_r0(const ModelParameters& params, const DfeWeights& weights,
                    const EfficacyCombination& eff)
{
    params.validate();
    weights.validate();
    eff.validate();
    return urban_r0_term(params, weights.p1, eff);
}

} // namespace seirim
