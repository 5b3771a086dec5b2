#include "seirim/model.hpp"

#include <cmath>
#include <sstream>

#include "seirim/errors.hpp"

namespace seirim {

namespace {

const char* kLabels[kCompartments] = {"S_u", "E_u", "I_u", "R_u", "Q_r",
                                      "S_r", "E_r", "I_r", "R_r"};

} // namespace

const char* compartment_label(int index)
{
    return kLabels[index];
}

std::array<double, kCompartments> StateVector::to_array() const
{
    return {s_u, e_u, i_u, r_u, q_r, s_r, e_r, i_r, r_r};
}

StateVector StateVector::from_array(const std::array<double, kCompartments>& a)
{
    return StateVector{a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8]};
}

double StateVector::operator[](int index) const
{
    return to_array()[static_cast<std::size_t>(index)];
}

double& StateVector::operator[](int index)
{
    double* fields[kCompartments] = {&s_u, &e_u, &i_u, &r_u, &q_r, &s_r, &e_r, &i_r, &r_r};
    return *fields[index];
}

bool StateVector::all_finite() const
{
    for (double v : to_array())
        if (!std::isfinite(v))
            return false;
    return true;
}

double StateVector::min_component() const
{
    double lo = s_u;
    for (double v : to_array())
        lo = std::min(lo, v);
    return lo;
}

std::array<double, kCompartments> DerivativeVector::to_array() const
{
    return {s_u, e_u, i_u, r_u, q_r, s_r, e_r, i_r, r_r};
}

DerivativeVector DerivativeVector::from_array(const std::array<double, kCompartments>& a)
{
    return DerivativeVector{a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8]};
}

double DerivativeVector::operator[](int index) const
{
    return to_array()[static_cast<std::size_t>(index)];
}

bool DerivativeVector::all_finite() const
{
    for (double v : to_array())
        if (!std::isfinite(v))
            return false;
    return true;
}

void ModelParameters::validate() const
{
    std::ostringstream issues;
    auto require = [&](bool ok, const char* what) {
        if (!ok)
            issues << (issues.tellp() > 0 ? "; " : "") << what;
    };
    require(std::isfinite(b1) && b1 >= 0.0, "b1 must be finite and >= 0");
    require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
    require(std::isfinite(mu_c) && mu_c > 0.0, "mu_c must be finite and > 0");
    require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be finite and >= 0");
    require(std::isfinite(d1) && d1 >= 0.0, "d1 must be finite and >= 0");
    require(std::isfinite(k) && k >= 0.0, "k must be finite and >= 0");
    require(std::isfinite(m) && m >= 0.0, "m must be finite and >= 0");
    require(std::isfinite(p) && p >= 0.0 && p <= 1.0, "p must be in [0,1]");
    if (issues.tellp() > 0)
        throw ValidationError("invalid model parameters: " + issues.str());
}

void IncidenceMode::validate() const
{
    if (kind == Kind::FixedN && !(std::isfinite(n_value) && n_value > 0.0))
        throw ValidationError("fixed incidence population must be finite and > 0");
}

double total_population(const StateVector& state)
{
    return state.s_u + state.e_u + state.i_u + state.r_u + state.q_r + state.s_r +
           state.e_r + state.i_r + state.r_r;
}

namespace {

// beta*S*I/N with the 0/0 continuous extension: zero whenever S*I == 0.
double incidence(double beta, double s, double i, double n)
{
    const double si = s * i;
    if (si == 0.0 || beta == 0.0)
        return 0.0;
    if (n == 0.0)
        throw NumericError("singular incidence: total population is zero while S*I > 0");
    return beta * si / n;
}

} // namespace

DerivativeVector rhs(const StateVector& state, const ModelParameters& params,
                     const IncidenceMode& mode)
{
    return rhs(state, params, mode, RateModifiers{});
}

DerivativeVector rhs(const StateVector& state, const ModelParameters& params,
                     const IncidenceMode& mode, const RateModifiers& mods)
{
    if (!state.all_finite())
        throw ValidationError("rhs: state has non-finite components");
    params.validate();
    mode.validate();

    const double n =
        mode.kind == IncidenceMode::Kind::DynamicN ? total_population(state) : mode.n_value;

    const double lambda_u = incidence(params.beta, state.s_u, state.i_u, n);
    const double lambda_r = incidence(params.beta, state.s_r, state.i_r, n);

    const double k_u = params.k * mods.k_u;
    const double k_r = params.k * mods.k_r;
    const double g_u = params.gamma * mods.gamma_u;
    const double g_r = params.gamma * mods.gamma_r;

    DerivativeVector d;
    d.s_u = params.b1 - lambda_u - params.mu_c * state.s_u - params.m * state.s_u;
    d.e_u = lambda_u - k_u * state.e_u - params.mu_c * state.e_u - params.m * state.e_u;
    d.i_u = k_u * state.e_u - g_u * state.i_u - params.mu_c * state.i_u;
    d.r_u = g_u * state.i_u - params.mu_c * state.r_u;
    d.q_r = params.p * params.m * (state.s_u + state.e_u) - params.d1 * state.q_r;
    d.s_r = (1.0 - params.p) * params.m * state.s_u - lambda_r - params.mu_c * state.s_r;
    d.e_r = (1.0 - params.p) * params.m * state.e_u + lambda_r - k_r * state.e_r -
            params.mu_c * state.e_r;
    d.i_r = k_r * state.e_r - g_r * state.i_r - params.mu_c * state.i_r;
    d.r_r = g_r * state.i_r - params.mu_c * state.r_r;
    return d;
}

std::vector<std::pair<int, double>> boundary_inflow_check(const StateVector& state,
                                                          const ModelParameters& params,
                                                          const IncidenceMode& mode)
{
    const DerivativeVector d = rhs(state, params, mode);
    std::vector<std::pair<int, double>> out;
    for (int i = 0; i < kCompartments; ++i)
        if (state[i] == 0.0)
            out.emplace_back(i, d[i]);
    return out;
}

} // namespace seirim
