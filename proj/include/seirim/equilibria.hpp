#pragma once

// Equilibrium analysis: the disease-free equilibrium in closed form, infected
// equilibria by damped-Newton multistart on rhs = 0, Jacobians with exact
// partial derivatives, and eigenvalue-based local stability classification.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "seirim/model.hpp"

namespace seirim {

using Matrix9 = Eigen::Matrix<double, kCompartments, kCompartments>;

enum class Stability { LocallyStable, Unstable, Marginal };
enum class EquilibriumKind { DiseaseFree, Infected };

const char* stability_label(Stability s);
const char* equilibrium_kind_label(EquilibriumKind k);

struct EquilibriumReport {
    StateVector state;
    double residual_norm = 0.0; // L2 norm of rhs at the state
    std::vector<std::complex<double>> eigenvalues; // 9, sorted by (re, im)
    Stability stability = Stability::Marginal;
    EquilibriumKind kind = EquilibriumKind::DiseaseFree;
};

// Exact Jacobian of rhs at a state. Under dynamic incidence the N-dependence
// of beta*S*I/N is differentiated as well, so every column picks up a
// -beta*S*I/N^2 contribution from the incidence terms.
Matrix9 jacobian(const StateVector& state, const ModelParameters& params,
                 const IncidenceMode& mode);

// Eigenvalues sorted by (real, imag); dense QR solver on a private copy.
std::vector<std::complex<double>> eigenvalues_sorted(const Matrix9& matrix);

// Stable iff all real parts < -1e-10, unstable iff any > +1e-10, else
// marginal.
Stability classify_eigenvalues(const std::vector<std::complex<double>>& eigenvalues);

// Test seam: classify an arbitrary matrix without going through the model.
std::pair<std::vector<std::complex<double>>, Stability> classify_from_jacobian(const Matrix9& jac);

// Full report for a candidate equilibrium state.
EquilibriumReport classify_stability(const StateVector& state, const ModelParameters& params,
                                     const IncidenceMode& mode, EquilibriumKind kind);

// Fixed incidence population anchored at the disease-free totals
// (S_u* + S_r* + Q_r*). This is the convention under which the linearized
// infected block matches the next-generation matrices exactly.
IncidenceMode fixed_n_at_dfe(const ModelParameters& params);

// Closed-form disease-free equilibrium:
//   S_u* = b1/(mu_c+m),  S_r* = (1-p) b1 m / (mu_c (mu_c+m)),
//   Q_r* = p b1 m / (d1 (mu_c+m)),  all other compartments 0.
EquilibriumReport disease_free_equilibrium(const ModelParameters& params);

// Urban-block equilibrium values with I_u != 0 when the incidence population
// is held fixed at n_total. The urban block is self-contained, so these
// follow directly from its three balance equations.
struct UrbanBranch {
    double s_u = 0.0;
    double e_u = 0.0;
    double i_u = 0.0; // may be negative, in which case the branch is unphysical
};
UrbanBranch endemic_urban_branch(const ModelParameters& params, double n_total);

// Cubic a3 x^3 + a2 x^2 + a1 x + a0 whose positive roots are the candidate
// equilibrium values of I_r, given the urban-side values (e_u_star, s_u_star)
// and a fixed incidence population n_total. Obtained by eliminating S_r and
// E_r from the rural balance equations and clearing the
// (beta I_r / n + mu_c) denominator; the extra root introduced by the
// clearing factor is negative, so positive-root counts are unchanged.
struct CubicCoefficients {
    double a3 = 0.0;
    double a2 = 0.0;
    double a1 = 0.0;
    double a0 = 0.0;

    double evaluate(double x) const;
    // Descartes: alternations in the signs of the nonzero coefficients.
    int sign_changes() const;
};

CubicCoefficients infected_cubic(const ModelParameters& params, double e_u_star,
                                 double s_u_star, double n_total);

// All real roots (deduplicated, ascending). Closed-form solve plus Newton
// polishing on the input coefficients.
std::vector<double> real_roots(const CubicCoefficients& cubic);

inline constexpr const char* kCubicMismatchNote = "cubic cross-check mismatch";

struct InfectedSearch {
    std::vector<EquilibriumReport> equilibria; // sorted by total infected
    std::vector<std::string> notes; // solver diagnostics and cross-check mismatches
};

// Damped-Newton multistart search for non-negative fixed points with
// I_u > 0 or I_r > 0. Starts place the infected compartments on a 3-point
// grid spanning (0, b1/mu_c] with susceptibles at their disease-free values;
// steps are halved until the residual decreases, up to 200 iterations per
// start. Under fixed incidence every hit is cross-checked against the
// positive roots of the infected cubic; mismatches are logged in notes,
// never dropped. Newton failing everywhere yields an empty list plus a
// diagnostic note, not an error.
InfectedSearch infected_equilibria(const ModelParameters& params, const IncidenceMode& mode);

} // namespace seirim
