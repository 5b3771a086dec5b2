#pragma once

// Two-population (urban/rural) SEIR model with one-way urban-to-rural
// migration and a quarantine compartment for intercepted migrants.
//
// Compartment order used everywhere in this project:
//   S_u, E_u, I_u, R_u, Q_r, S_r, E_r, I_r, R_r

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace seirim {

inline constexpr int kCompartments = 9;

// Canonical short labels, also used verbatim in CSV headers.
const char* compartment_label(int index);

struct StateVector {
    double s_u = 0.0; // susceptible, urban
    double e_u = 0.0; // exposed, urban
    double i_u = 0.0; // infected, urban
    double r_u = 0.0; // recovered, urban
    double q_r = 0.0; // quarantined migrants
    double s_r = 0.0; // susceptible, rural
    double e_r = 0.0; // exposed, rural
    double i_r = 0.0; // infected, rural
    double r_r = 0.0; // recovered, rural

    std::array<double, kCompartments> to_array() const;
    static StateVector from_array(const std::array<double, kCompartments>& a);

    double operator[](int index) const;
    double& operator[](int index);

    bool all_finite() const;
    double min_component() const;

    bool operator==(const StateVector&) const = default;
};

// Same layout as StateVector but in persons per unit time.
struct DerivativeVector {
    double s_u = 0.0;
    double e_u = 0.0;
    double i_u = 0.0;
    double r_u = 0.0;
    double q_r = 0.0;
    double s_r = 0.0;
    double e_r = 0.0;
    double i_r = 0.0;
    double r_r = 0.0;

    std::array<double, kCompartments> to_array() const;
    static DerivativeVector from_array(const std::array<double, kCompartments>& a);

    double operator[](int index) const;

    bool all_finite() const;

    bool operator==(const DerivativeVector&) const = default;
};

struct ModelParameters {
    double b1 = 0.0;    // birth rate, persons/time
    double beta = 0.0;  // transmission rate, 1/time
    double mu_c = 0.0;  // natural death rate, 1/time (must be > 0)
    double gamma = 0.0; // recovery rate, 1/time
    double d1 = 0.0;    // death rate of quarantined, 1/time
    double k = 0.0;     // incubation rate, 1/time
    double m = 0.0;     // urban-to-rural migration rate, 1/time
    double p = 0.0;     // fraction of migrants quarantined, in [0,1]

    // Throws ValidationError listing every violated constraint.
    void validate() const;

    bool operator==(const ModelParameters&) const = default;
};

// Selects the N in the incidence terms beta*S*I/N: either the live sum of
// all nine compartments or a supplied constant.
struct IncidenceMode {
    enum class Kind { DynamicN, FixedN };

    Kind kind = Kind::DynamicN;
    double n_value = 0.0; // only meaningful for FixedN

    static IncidenceMode dynamic() { return IncidenceMode{Kind::DynamicN, 0.0}; }
    static IncidenceMode fixed(double n) { return IncidenceMode{Kind::FixedN, n}; }

    void validate() const;

    bool operator==(const IncidenceMode&) const = default;
};

// Per-population scaling of the incubation and recovery rates. Identity by
// default; the effectiveness module maps intervention efficacies onto this
// so intervention scenarios can optionally be simulated, not just scored.
struct RateModifiers {
    double k_u = 1.0;
    double k_r = 1.0;
    double gamma_u = 1.0;
    double gamma_r = 1.0;

    bool is_identity() const
    {
        return k_u == 1.0 && k_r == 1.0 && gamma_u == 1.0 && gamma_r == 1.0;
    }

    bool operator==(const RateModifiers&) const = default;
};

// Sum of the nine compartments.
double total_population(const StateVector& state);

// Right-hand side of the ODE system. The incidence term beta*S*I/N is
// defined as 0 whenever S*I == 0, even if N == 0, so the origin is
// evaluable. Throws ValidationError on non-finite input or invalid
// parameters and NumericError when dynamic N is 0 with S*I > 0.
DerivativeVector rhs(const StateVector& state, const ModelParameters& params,
                     const IncidenceMode& mode);
DerivativeVector rhs(const StateVector& state, const ModelParameters& params,
                     const IncidenceMode& mode, const RateModifiers& mods);

// For every compartment that is zero in `state`, reports (compartment
// index, rhs component). On a non-negative state all reported values are
// >= 0: the vector field points inward on the boundary planes.
std::vector<std::pair<int, double>> boundary_inflow_check(const StateVector& state,
                                                          const ModelParameters& params,
                                                          const IncidenceMode& mode);

} // namespace seirim
