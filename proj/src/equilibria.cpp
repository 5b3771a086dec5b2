#include "seirim/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "seirim/errors.hpp"

namespace seirim {

const char* stability_label(Stability s)
{
    switch (s) {
    case Stability::LocallyStable: return "locally_stable";
    case Stability::Unstable: return "unstable";
    case Stability::Marginal: return "marginal";
    }
    return "?";
}

const char* equilibrium_kind_label(EquilibriumKind k)
{
    return k == EquilibriumKind::DiseaseFree ? "disease_free" : "infected";
}

namespace {

constexpr double kMarginalBand = 1e-10;

double residual_norm_at(const StateVector& state, const ModelParameters& params,
                        const IncidenceMode& mode)
{
    const auto d = rhs(state, params, mode).to_array();
    double sum = 0.0;
    for (double v : d)
        sum += v * v;
    return std::sqrt(sum);
}

} // namespace

Matrix9 jacobian(const StateVector& state, const ModelParameters& params,
                 const IncidenceMode& mode)
{
    if (!state.all_finite())
        throw ValidationError("jacobian: state has non-finite components");
    params.validate();
    mode.validate();

    const double n =
        mode.kind == IncidenceMode::Kind::DynamicN ? total_population(state) : mode.n_value;
    const bool dynamic = mode.kind == IncidenceMode::Kind::DynamicN;

    // Gradient of beta*S*I/N with respect to all nine compartments.
    auto incidence_grad = [&](int s_idx, int i_idx) {
        std::array<double, kCompartments> grad{};
        if (params.beta == 0.0)
            return grad;
        if (n == 0.0)
            throw NumericError("jacobian: singular incidence, total population is zero");
        const double s = state[s_idx];
        const double i = state[i_idx];
        grad[static_cast<std::size_t>(s_idx)] += params.beta * i / n;
        grad[static_cast<std::size_t>(i_idx)] += params.beta * s / n;
        if (dynamic) {
            const double g = params.beta * s * i / n;
            for (auto& v : grad)
                v -= g / n;
        }
        return grad;
    };

    const auto gu = incidence_grad(0, 2); // S_u, I_u
    const auto gr = incidence_grad(5, 7); // S_r, I_r

    Matrix9 J = Matrix9::Zero();
    for (int j = 0; j < kCompartments; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        J(0, j) -= gu[ju];
        J(1, j) += gu[ju];
        J(5, j) -= gr[ju];
        J(6, j) += gr[ju];
    }
    J(0, 0) += -(params.mu_c + params.m);
    J(1, 1) += -(params.k + params.mu_c + params.m);
    J(2, 1) += params.k;
    J(2, 2) += -(params.gamma + params.mu_c);
    J(3, 2) += params.gamma;
    J(3, 3) += -params.mu_c;
    J(4, 0) += params.p * params.m;
    J(4, 1) += params.p * params.m;
    J(4, 4) += -params.d1;
    J(5, 0) += (1.0 - params.p) * params.m;
    J(5, 5) += -params.mu_c;
    J(6, 1) += (1.0 - params.p) * params.m;
    J(6, 6) += -(params.k + params.mu_c);
    J(7, 6) += params.k;
    J(7, 7) += -(params.gamma + params.mu_c);
    J(8, 7) += params.gamma;
    J(8, 8) += -params.mu_c;
    return J;
}

std::vector<std::complex<double>> eigenvalues_sorted(const Matrix9& matrix)
{
    Eigen::EigenSolver<Matrix9> solver(matrix, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "eigensolver failed to converge on matrix:\n" << matrix;
        throw NumericError(msg.str());
    }
    std::vector<std::complex<double>> ev(kCompartments);
    for (int i = 0; i < kCompartments; ++i)
        ev[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real())
            return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return ev;
}

Stability classify_eigenvalues(const std::vector<std::complex<double>>& eigenvalues)
{
    bool any_positive = false;
    bool all_negative = true;
    for (const auto& ev : eigenvalues) {
        if (ev.real() > kMarginalBand)
            any_positive = true;
        if (!(ev.real() < -kMarginalBand))
            all_negative = false;
    }
    if (any_positive)
        return Stability::Unstable;
    return all_negative ? Stability::LocallyStable : Stability::Marginal;
}

std::pair<std::vector<std::complex<double>>, Stability> classify_from_jacobian(const Matrix9& jac)
{
    auto ev = eigenvalues_sorted(jac);
    const Stability st = classify_eigenvalues(ev);
    return {std::move(ev), st};
}

EquilibriumReport classify_stability(const StateVector& state, const ModelParameters& params,
                                     const IncidenceMode& mode, EquilibriumKind kind)
{
    EquilibriumReport report;
    report.state = state;
    report.kind = kind;
    report.residual_norm = residual_norm_at(state, params, mode);
    auto [ev, st] = classify_from_jacobian(jacobian(state, params, mode));
    report.eigenvalues = std::move(ev);
    report.stability = st;
    return report;
}

IncidenceMode fixed_n_at_dfe(const ModelParameters& params)
{
    const auto dfe = disease_free_equilibrium(params);
    const double n = total_population(dfe.state);
    if (!(n > 0.0))
        throw NumericError("degenerate parameters: disease-free population is empty");
    return IncidenceMode::fixed(n);
}

EquilibriumReport disease_free_equilibrium(const ModelParameters& params)
{
    params.validate();
    const double denom = params.mu_c + params.m;
    if (!(denom > 0.0))
        throw NumericError("degenerate parameters: mu_c + m must be positive");

    StateVector state;
    state.s_u = params.b1 / denom;
    state.s_r = (1.0 - params.p) * params.b1 * params.m / (params.mu_c * denom);
    const double quarantine_inflow = params.p * params.b1 * params.m;
    if (quarantine_inflow > 0.0 && !(params.d1 > 0.0))
        throw NumericError("degenerate parameters: d1 = 0 with nonzero quarantine inflow");
    state.q_r = params.d1 > 0.0 ? quarantine_inflow / (params.d1 * denom) : 0.0;

    const double n = total_population(state);
    IncidenceMode mode;
    if (n > 0.0) {
        mode = IncidenceMode::fixed(n);
    } else if (params.beta == 0.0) {
        mode = IncidenceMode::fixed(1.0);
    } else {
        throw NumericError("degenerate parameters: empty disease-free population with beta > 0");
    }
    return classify_stability(state, params, mode, EquilibriumKind::DiseaseFree);
}

UrbanBranch endemic_urban_branch(const ModelParameters& params, double n_total)
{
    params.validate();
    if (!(n_total > 0.0))
        throw ValidationError("endemic_urban_branch: n_total must be > 0");
    if (!(params.k > 0.0) || !(params.beta > 0.0))
        throw NumericError("degenerate parameters: endemic urban branch needs k > 0 and beta > 0");
    const double out_e = params.k + params.m + params.mu_c;
    const double out_i = params.gamma + params.mu_c;
    UrbanBranch branch;
    branch.s_u = n_total * out_e * out_i / (params.k * params.beta);
    branch.i_u = params.b1 * params.k / (out_e * out_i) -
                 (params.mu_c + params.m) * n_total / params.beta;
    branch.e_u = out_i * branch.i_u / params.k;
    return branch;
}

double CubicCoefficients::evaluate(double x) const
{
    return ((a3 * x + a2) * x + a1) * x + a0;
}

int CubicCoefficients::sign_changes() const
{
    const double coeffs[4] = {a3, a2, a1, a0};
    int changes = 0;
    int prev = 0;
    for (double c : coeffs) {
        const int s = c > 0.0 ? 1 : (c < 0.0 ? -1 : 0);
        if (s == 0)
            continue;
        if (prev != 0 && s != prev)
            ++changes;
        prev = s;
    }
    return changes;
}

CubicCoefficients infected_cubic(const ModelParameters& params, double e_u_star,
                                 double s_u_star, double n_total)
{
    params.validate();
    if (!(n_total > 0.0))
        throw ValidationError("infected_cubic: n_total must be > 0");
    if (!(params.k > 0.0))
        throw NumericError("degenerate parameters: infected cubic needs k > 0");

    // Rural balance with E_r eliminated through I_r:
    //   c1*I_r = A + b*B*I_r / (b*I_r + mu_c),  b = beta/n.
    // Multiplying by (b*I_r + mu_c)^2 gives the cubic below; the clearing
    // factor contributes the root I_r = -mu_c/b < 0 only.
    const double c1 = (params.gamma + params.mu_c) * (params.k + params.mu_c) / params.k;
    const double b = params.beta / n_total;
    const double a = (1.0 - params.p) * params.m * e_u_star;
    const double cap_b = (1.0 - params.p) * params.m * s_u_star;

    CubicCoefficients cubic;
    cubic.a3 = c1 * b * b;
    cubic.a2 = b * (2.0 * c1 * params.mu_c - (a + cap_b) * b);
    cubic.a1 = params.mu_c * (c1 * params.mu_c - (2.0 * a + cap_b) * b);
    cubic.a0 = -a * params.mu_c * params.mu_c;
    return cubic;
}

namespace {

void polish_root(const CubicCoefficients& c, double& x)
{
    for (int it = 0; it < 40; ++it) {
        const double f = c.evaluate(x);
        const double df = (3.0 * c.a3 * x + 2.0 * c.a2) * x + c.a1;
        if (df == 0.0 || !std::isfinite(f) || !std::isfinite(df))
            return;
        const double step = f / df;
        const double next = x - step;
        if (!std::isfinite(next))
            return;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(next))) {
            x = next;
            return;
        }
        x = next;
    }
}

std::vector<double> quadratic_real_roots(double a, double b, double c)
{
    std::vector<double> roots;
    if (a == 0.0) {
        if (b != 0.0)
            roots.push_back(-c / b);
        return roots;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0)
        return roots;
    const double sq = std::sqrt(disc);
    // Stable form avoiding cancellation between -b and the radical.
    const double q = -0.5 * (b + std::copysign(sq, b));
    if (q != 0.0) {
        roots.push_back(q / a);
        roots.push_back(c / q);
    } else {
        roots.push_back(0.0);
        roots.push_back(-b / a);
    }
    return roots;
}

} // namespace

std::vector<double> real_roots(const CubicCoefficients& cubic)
{
    std::vector<double> roots;
    if (cubic.a3 == 0.0) {
        roots = quadratic_real_roots(cubic.a2, cubic.a1, cubic.a0);
    } else {
        const double p = cubic.a2 / cubic.a3;
        const double q = cubic.a1 / cubic.a3;
        const double r = cubic.a0 / cubic.a3;
        // Depressed form y^3 + ay + b with x = y - p/3.
        const double a = q - p * p / 3.0;
        const double b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
        const double shift = -p / 3.0;
        const double disc = 0.25 * b * b + a * a * a / 27.0;
        if (disc > 0.0) {
            const double sq = std::sqrt(disc);
            const double u = std::cbrt(-0.5 * b + sq);
            const double v = std::cbrt(-0.5 * b - sq);
            roots.push_back(u + v + shift);
        } else if (a == 0.0) {
            roots.push_back(std::cbrt(-b) + shift);
        } else {
            const double mag = 2.0 * std::sqrt(-a / 3.0);
            const double arg = std::clamp(3.0 * b / (a * mag), -1.0, 1.0);
            const double theta = std::acos(arg) / 3.0;
            for (int kidx = 0; kidx < 3; ++kidx)
                roots.push_back(mag * std::cos(theta - 2.0 * M_PI * kidx / 3.0) + shift);
        }
    }
    for (auto& x : roots)
        polish_root(cubic, x);
    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double x : roots) {
        if (!std::isfinite(x))
            continue;
        if (unique.empty() || std::abs(x - unique.back()) > 1e-9 * (1.0 + std::abs(x)))
            unique.push_back(x);
    }
    return unique;
}

namespace {

using Vec9 = Eigen::Matrix<double, kCompartments, 1>;

Vec9 rhs_vec(const StateVector& state, const ModelParameters& params, const IncidenceMode& mode)
{
    const auto d = rhs(state, params, mode).to_array();
    Vec9 v;
    for (int i = 0; i < kCompartments; ++i)
        v(i) = d[static_cast<std::size_t>(i)];
    return v;
}

StateVector to_state(const Vec9& v)
{
    std::array<double, kCompartments> a;
    for (int i = 0; i < kCompartments; ++i)
        a[static_cast<std::size_t>(i)] = v(i);
    return StateVector::from_array(a);
}

struct NewtonOutcome {
    bool converged = false;
    StateVector state;
    double residual = 0.0;
};

NewtonOutcome damped_newton(const StateVector& start, const ModelParameters& params,
                            const IncidenceMode& mode, double accept_tol, double target_tol)
{
    NewtonOutcome out;
    Vec9 x;
    {
        const auto a = start.to_array();
        for (int i = 0; i < kCompartments; ++i)
            x(i) = a[static_cast<std::size_t>(i)];
    }
    double res;
    try {
        res = rhs_vec(to_state(x), params, mode).norm();
    } catch (const Error&) {
        return out;
    }
    for (int iter = 0; iter < 200; ++iter) {
        if (res <= target_tol)
            break;
        Vec9 f;
        Matrix9 jac;
        try {
            f = rhs_vec(to_state(x), params, mode);
            jac = jacobian(to_state(x), params, mode);
        } catch (const Error&) {
            return out;
        }
        const Vec9 step = jac.partialPivLu().solve(-f);
        if (!step.allFinite())
            return out;
        double lambda = 1.0;
        bool improved = false;
        while (lambda >= 1e-10) {
            const Vec9 trial = x + lambda * step;
            double trial_res;
            try {
                trial_res = rhs_vec(to_state(trial), params, mode).norm();
            } catch (const Error&) {
                lambda *= 0.5;
                continue;
            }
            if (trial_res < res) {
                x = trial;
                res = trial_res;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved)
            break;
    }
    if (res <= accept_tol) {
        out.converged = true;
        out.state = to_state(x);
        out.residual = res;
    }
    return out;
}

double state_distance(const StateVector& a, const StateVector& b)
{
    const auto av = a.to_array();
    const auto bv = b.to_array();
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < kCompartments; ++i) {
        diff += (av[i] - bv[i]) * (av[i] - bv[i]);
        scale = std::max({scale, std::abs(av[i]), std::abs(bv[i])});
    }
    return std::sqrt(diff) / (1.0 + scale);
}

} // namespace

InfectedSearch infected_equilibria(const ModelParameters& params, const IncidenceMode& mode)
{
    params.validate();
    mode.validate();

    InfectedSearch result;
    const double cap = params.mu_c > 0.0 && params.b1 > 0.0 ? params.b1 / params.mu_c : 1.0;
    const double accept_tol = params.b1 > 0.0 ? 1e-8 * params.b1 : 1e-20;
    const double target_tol = params.b1 > 0.0 ? 1e-13 * params.b1 : 0.0;
    const double infected_floor = 1e-9 * std::max(1.0, cap);
    const double negative_floor = -1e-8 * std::max(1.0, cap);

    StateVector dfe_state;
    try {
        dfe_state = disease_free_equilibrium(params).state;
    } catch (const NumericError&) {
        // Fall back to an uninformed start when the closed form degenerates.
        dfe_state = StateVector{};
    }

    const double grid[3] = {1e-3 * cap, 3e-2 * cap, cap};
    std::vector<StateVector> found;
    int converged_starts = 0;
    int total_starts = 0;

    // Susceptibles are slaved to the infected guesses through their balance
    // equations (raw disease-free values put every start in the Newton basin
    // of the disease-free point). At zero infection these expressions reduce
    // to the disease-free values exactly.
    const double n_slave = mode.kind == IncidenceMode::Kind::FixedN
                               ? mode.n_value
                               : std::max(total_population(dfe_state), 1.0);

    for (double e_u : grid)
        for (double i_u : grid)
            for (double e_r : grid)
                for (double i_r : grid) {
                    ++total_starts;
                    StateVector start = dfe_state;
                    start.e_u = e_u;
                    start.i_u = i_u;
                    start.e_r = e_r;
                    start.i_r = i_r;
                    start.s_u = params.b1 / (params.beta * i_u / n_slave + params.mu_c + params.m);
                    start.s_r = (1.0 - params.p) * params.m * start.s_u /
                                (params.beta * i_r / n_slave + params.mu_c);
                    if (params.d1 > 0.0)
                        start.q_r = params.p * params.m * (start.s_u + start.e_u) / params.d1;
                    start.r_u = params.gamma * i_u / params.mu_c;
                    start.r_r = params.gamma * i_r / params.mu_c;
                    const NewtonOutcome outcome =
                        damped_newton(start, params, mode, accept_tol, target_tol);
                    if (!outcome.converged)
                        continue;
                    ++converged_starts;
                    const StateVector& s = outcome.state;
                    if (s.min_component() < negative_floor)
                        continue;
                    if (std::max(s.i_u, s.i_r) <= infected_floor)
                        continue; // disease-free, not an infected equilibrium
                    bool duplicate = false;
                    for (const auto& other : found)
                        if (state_distance(s, other) < 1e-6)
                            duplicate = true;
                    if (!duplicate)
                        found.push_back(s);
                }

    if (converged_starts == 0) {
        result.notes.push_back("newton did not converge from any of " +
                               std::to_string(total_starts) + " starts");
        return result;
    }

    std::sort(found.begin(), found.end(), [](const StateVector& a, const StateVector& b) {
        const double ia = a.i_u + a.i_r;
        const double ib = b.i_u + b.i_r;
        if (ia != ib)
            return ia < ib;
        return a.to_array() < b.to_array();
    });

    for (const auto& s : found)
        result.equilibria.push_back(classify_stability(s, params, mode, EquilibriumKind::Infected));

    // Cross-check I_r against the cubic for the matching urban branch. Only
    // meaningful when the incidence population is a constant.
    if (mode.kind == IncidenceMode::Kind::FixedN && params.k > 0.0 && params.beta > 0.0) {
        const double n = mode.n_value;
        for (std::size_t idx = 0; idx < result.equilibria.size(); ++idx) {
            const auto& eq = result.equilibria[idx].state;
            CubicCoefficients cubic;
            if (eq.i_u > infected_floor) {
                const UrbanBranch branch = endemic_urban_branch(params, n);
                cubic = infected_cubic(params, branch.e_u, branch.s_u, n);
            } else {
                cubic = infected_cubic(params, 0.0, params.b1 / (params.mu_c + params.m), n);
            }
            bool matched = false;
            for (double root : real_roots(cubic))
                if (std::abs(eq.i_r - root) <= 1e-6 * (1.0 + std::abs(root)))
                    matched = true;
            if (!matched) {
                std::ostringstream note;
                note << kCubicMismatchNote << ": equilibrium " << idx + 1
                     << " has I_r = " << eq.i_r << " with no matching cubic root";
                result.notes.push_back(note.str());
            }
        }
    }
    return result;
}

} // namespace seirim
