// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "seirim/config.hpp"
#include "seirim/draws.hpp"
#include "seirim/effectiveness.hpp"
#include "seirim/equilibria.hpp"
#include "seirim/errors.hpp"
#include "seirim/integrate.hpp"
#include "seirim/io.hpp"
#include "seirim/reproduction.hpp"
#include "seirim/rng.hpp"
#include "seirim/sensitivity.hpp"

namespace fs = std::filesystem;
using namespace seirim;
using Clock = std::chrono::steady_clock;

namespace {

const char* kBin = SEIRIM_BIN;
const fs::path kSourceDir = SEIRIM_SOURCE_DIR;

int g_failures = 0;

void verdict(int criterion, bool pass, const std::string& name, const std::string& detail)
{
    std::cout << "criterion " << criterion << " [" << (pass ? "PASS" : "FAIL") << "] " << name
              << ": " << detail << "\n";
    if (!pass)
        ++g_failures;
}

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

ModelParameters base_params()
{
    ModelParameters params;
    params.b1 = 350.0;
    params.gamma = 0.0714;
    params.beta = 0.00028;
    params.d1 = 0.013;
    params.mu_c = 0.0062;
    params.k = 0.1961;
    params.m = 0.000182;
    params.p = 0.5;
    return params;
}

// 1. Closed-form vs numeric spectral radius over 1000 seeded draws.
void criterion_1()
{
    const auto start = Clock::now();
    Rng rng(1001);
    double worst = 0.0;
    int dominant = 0, non_dominant = 0;
    bool ok = true;
    for (int i = 0; i < 1000; ++i) {
        const ModelParameters params = random_parameters(rng);
        const DfeWeights weights = dfe_weights_from_equilibrium(params);
        const R0Result closed = r0_closed_form(params, weights);
        const double numeric = spectral_radius(next_generation(params, weights).k_matrix);
        if (!closed.urban_dominant) {
            ++non_dominant;
            continue;
        }
        ++dominant;
        const double gap = std::abs(closed.value - numeric);
        worst = std::max(worst, gap / (1.0 + closed.value));
        ok = ok && gap < 1e-10 * (1.0 + closed.value);
    }
    const double elapsed = seconds_since(start);
    ok = ok && elapsed < 5.0;
    std::ostringstream detail;
    detail << dominant << " urban-dominant draws, worst relative gap " << fmt_full(worst) << ", "
           << non_dominant << " rural-dominant draws reported, " << elapsed << " s";
    verdict(1, ok, "closed-form vs numeric r0", detail.str());
}

// 2. Disease-free equilibrium residual over 200 seeded draws.
void criterion_2()
{
    Rng rng(1002);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const ModelParameters params = random_parameters(rng);
        const auto dfe = disease_free_equilibrium(params);
        worst = std::max(worst, dfe.residual_norm / params.b1);
    }
    verdict(2, worst < 1e-9, "disease-free equilibrium residual",
            "worst residual/b1 = " + fmt_full(worst));
}

// 3. Threshold theorem: eigenvalue signs of the disease-free jacobian.
void criterion_3()
{
    Rng rng(1003);
    bool ok = true;
    std::ostringstream detail;
    for (int i = 0; i < 50; ++i) {
        const ModelParameters params = constructed_r0_draw(rng, rng.uniform(0.1, 0.85));
        const auto dfe = disease_free_equilibrium(params);
        const auto report =
            classify_stability(dfe.state, params, fixed_n_at_dfe(params), EquilibriumKind::DiseaseFree);
        for (const auto& ev : report.eigenvalues)
            if (!(ev.real() < -1e-10)) {
                ok = false;
                detail << "subcritical draw " << i << " has eigenvalue re=" << ev.real() << "; ";
            }
    }
    for (int i = 0; i < 50; ++i) {
        const ModelParameters params = constructed_r0_draw(rng, rng.uniform(1.15, 8.0));
        const auto dfe = disease_free_equilibrium(params);
        const auto report =
            classify_stability(dfe.state, params, fixed_n_at_dfe(params), EquilibriumKind::DiseaseFree);
        double max_real = -1e300;
        for (const auto& ev : report.eigenvalues)
            max_real = std::max(max_real, ev.real());
        if (!(max_real > 1e-10)) {
            ok = false;
            detail << "supercritical draw " << i << " max re=" << max_real << "; ";
        }
    }
    verdict(3, ok, "threshold theorem eigenvalue signs",
            ok ? "50 subcritical all stable, 50 supercritical all unstable" : detail.str());
}

// 4. Positivity and boundedness over 100 random initial states to t = 2000.
void criterion_4()
{
    const auto start = Clock::now();
    Rng rng(1004);
    const ModelParameters params = base_params();
    IntegrationSpec spec;
    spec.t_end = 2000.0;
    spec.method = Rk4Fixed{0.25};
    spec.record_every = 10.0;
    double min_component = 0.0;
    bool bounded = true;
    for (int i = 0; i < 100; ++i) {
        const StateVector init = random_nonnegative_state(rng, 1000.0);
        const Trajectory traj = integrate(init, params, IncidenceMode::dynamic(), spec);
        const double bound = std::max(total_population(init),
                                      params.b1 / std::min(params.mu_c, params.d1)) *
                             (1.0 + 1e-6);
        for (const auto& s : traj.states) {
            min_component = std::min(min_component, s.min_component());
            bounded = bounded && total_population(s) <= bound;
        }
    }
    const double elapsed = seconds_since(start);
    const bool ok = min_component >= -1e-8 && bounded && elapsed < 30.0;
    std::ostringstream detail;
    detail << "min component " << fmt_full(min_component) << ", bound "
           << (bounded ? "held" : "VIOLATED") << ", " << elapsed << " s";
    verdict(4, ok, "positivity and boundedness", detail.str());
}

// 5. RK4 convergence order and cross-method agreement.
void criterion_5()
{
    const StateVector init{100.0, 85.0, 50.0, 20.0, 10.0, 100.0, 85.0, 50.0, 20.0};
    const double order = convergence_order(init, base_params(), IncidenceMode::dynamic(), 0.5);

    IntegrationSpec tight;
    tight.t_end = 200.0;
    tight.method = Rk45Adaptive{1e-10, 1e-10, 10.0};
    tight.record_every = 10.0;
    const auto adaptive = integrate(init, base_params(), IncidenceMode::dynamic(), tight);
    IntegrationSpec fixed;
    fixed.t_end = 200.0;
    fixed.method = Rk4Fixed{0.01};
    fixed.record_every = 10.0;
    const auto reference = integrate(init, base_params(), IncidenceMode::dynamic(), fixed);
    double worst = 0.0;
    for (std::size_t row = 0; row < adaptive.states.size(); ++row)
        for (int c = 0; c < kCompartments; ++c)
            worst = std::max(worst, std::abs(adaptive.states[row][c] - reference.states[row][c]) /
                                        (1.0 + std::abs(reference.states[row][c])));
    const bool ok = order >= 3.8 && order <= 4.2 && worst < 1e-6;
    std::ostringstream detail;
    detail << "empirical order " << order << ", adaptive-vs-fixed relative gap "
           << fmt_full(worst);
    verdict(5, ok, "integrator order and cross-method agreement", detail.str());
}

// 6. Analytic jacobian vs central finite differences on 100 random states.
void criterion_6()
{
    Rng rng(1006);
    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const ModelParameters params = random_parameters(rng);
        StateVector state;
        for (int i = 0; i < kCompartments; ++i)
            state[i] = rng.uniform(1.0, 1000.0);
        const IncidenceMode mode =
            draw % 2 == 0 ? IncidenceMode::dynamic() : IncidenceMode::fixed(4500.0);
        const Matrix9 analytic = jacobian(state, params, mode);
        for (int col = 0; col < kCompartments; ++col) {
            const double h = 1e-6 * (1.0 + std::abs(state[col]));
            StateVector hi = state, lo = state;
            hi[col] += h;
            lo[col] -= h;
            const auto f_hi = rhs(hi, params, mode).to_array();
            const auto f_lo = rhs(lo, params, mode).to_array();
            for (int row = 0; row < kCompartments; ++row) {
                const double fd = (f_hi[static_cast<std::size_t>(row)] -
                                   f_lo[static_cast<std::size_t>(row)]) /
                                  (2.0 * h);
                worst = std::max(worst, std::abs(fd - analytic(row, col)) /
                                            (1.0 + std::abs(analytic(row, col))));
            }
        }
    }
    verdict(6, worst < 1e-6, "jacobian vs finite differences",
            "worst relative entry error " + fmt_full(worst));
}

// 7. Descartes consistency and cubic cross-checks over 500 draws.
void criterion_7()
{
    Rng rng(1007);
    bool descartes_ok = true;
    int mismatch_draws = 0;
    int draws_with_equilibria = 0;
    int total_equilibria = 0;
    double worst_residual = 0.0;
    for (int draw = 0; draw < 500; ++draw) {
        const ModelParameters params = random_parameters(rng);
        const IncidenceMode mode = fixed_n_at_dfe(params);

        const UrbanBranch branch = endemic_urban_branch(params, mode.n_value);
        const auto cubic = infected_cubic(params, branch.e_u, branch.s_u, mode.n_value);
        const int changes = cubic.sign_changes();
        int positive = 0;
        for (double root : real_roots(cubic))
            if (root > 0.0)
                ++positive;
        if (changes > 2 || positive > changes)
            descartes_ok = false;

        const auto search = infected_equilibria(params, mode);
        if (!search.equilibria.empty())
            ++draws_with_equilibria;
        total_equilibria += static_cast<int>(search.equilibria.size());
        for (const auto& eq : search.equilibria)
            worst_residual = std::max(worst_residual, eq.residual_norm / params.b1);
        bool mismatch = false;
        for (const auto& note : search.notes)
            if (note.find(kCubicMismatchNote) != std::string::npos)
                mismatch = true;
        if (mismatch)
            ++mismatch_draws;
    }
    const bool ok = descartes_ok && worst_residual < 1e-8 && mismatch_draws <= 25;
    std::ostringstream detail;
    detail << draws_with_equilibria << " draws carried " << total_equilibria
           << " infected equilibria, worst residual/b1 " << fmt_full(worst_residual) << ", "
           << mismatch_draws << " draws logged cubic mismatches (budget 25), Descartes "
           << (descartes_ok ? "consistent" : "VIOLATED");
    verdict(7, ok, "infected equilibria vs cubic", detail.str());
}

// 8. Effectiveness invariants.
void criterion_8()
{
    const ModelParameters params = base_params();
    const DfeWeights weights = dfe_weights_from_equilibrium(params);
    bool ok = true;
    std::ostringstream detail;

    const auto combos = builtin_combinations();
    const EfficacyCombination expected_first{0, 0, 0, 0, 0, 0};
    const EfficacyCombination expected_sixth{0.3, 0.3, 0.3, 0.3, 0.3, 0.3};
    const EfficacyCombination expected_last{0.9, 0.9, 0.9, 0.6, 0.9, 0.6};
    if (combos.size() != 17 || !(combos[0] == expected_first) || !(combos[5] == expected_sixth) ||
        !(combos[16] == expected_last)) {
        ok = false;
        detail << "builtin table corrupted; ";
    }

    const auto rows = effectiveness_table(params, weights, combos);
    if (rows[0].pr != 0.0) {
        ok = false;
        detail << "pr(zero combo) = " << rows[0].pr << "; ";
    }
    std::vector<bool> seen(rows.size() + 1, false);
    for (const auto& row : rows) {
        if (row.ce_rank < 1 || row.ce_rank > static_cast<int>(rows.size()) ||
            seen[static_cast<std::size_t>(row.ce_rank)]) {
            ok = false;
            detail << "rank collision at id " << row.id << "; ";
        } else {
            seen[static_cast<std::size_t>(row.ce_rank)] = true;
        }
    }

    Rng rng(1008);
    for (int trial = 0; trial < 200; ++trial) {
        EfficacyCombination a;
        double* af[6] = {&a.eps11, &a.eps12, &a.eps21, &a.eps22, &a.eps31, &a.eps32};
        for (double* f : af)
            *f = rng.uniform(0.0, 0.9);
        EfficacyCombination b = a;
        double* bf[6] = {&b.eps11, &b.eps12, &b.eps21, &b.eps22, &b.eps31, &b.eps32};
        bool bumped = false;
        while (!bumped)
            for (int i = 0; i < 6; ++i)
                if (rng.uniform01() < 0.5) {
                    *bf[i] += (0.95 - *bf[i]) * rng.uniform(0.1, 1.0);
                    bumped = true;
                }
        const auto pair_rows = effectiveness_table(params, weights, {a, b});
        if (!(pair_rows[0].pr < pair_rows[1].pr)) {
            ok = false;
            detail << "dominance violated at trial " << trial << "; ";
            break;
        }
    }
    verdict(8, ok, "effectiveness invariants",
            ok ? "zero combo exact, ranks a permutation, 200 dominated pairs monotone, table "
                 "field-exact"
               : detail.str());
}

// 9. Sensitivity engine invariants.
void criterion_9()
{
    bool ok = true;
    std::ostringstream detail;

    SweepSpec spec;
    spec.base = base_params();
    spec.init = StateVector{100.0, 85.0, 50.0, 20.0, 10.0, 100.0, 85.0, 50.0, 20.0};
    spec.integration.t_end = 300.0;
    spec.integration.method = Rk4Fixed{0.05};
    spec.integration.record_every = 1.0;

    // Two identical grid values.
    spec.parameter = "mu_c";
    spec.lo = 0.1;
    spec.hi = 0.5;
    spec.step = 0.1;
    spec.mode = IncidenceMode::dynamic();
    const SweepResult twin = run_sweep_over(spec, {0.3, 0.3}, 2);
    for (double v : twin.mse)
        if (v != 0.0) {
            ok = false;
            detail << "twin sweep mse nonzero; ";
            break;
        }

    // d1 sweeps: with the incidence population fixed, Q_r feeds nothing, so
    // the infected columns are bit-identical and the verdict is insensitive.
    spec.parameter = "d1";
    spec.mode = IncidenceMode::fixed(520.0);
    for (const auto& iv : default_sweep_intervals()) {
        if (iv.parameter != "d1")
            continue;
        spec.lo = iv.lo;
        spec.hi = iv.hi;
        spec.step = iv.step;
        const SweepResult result = run_sweep(spec, 2);
        for (double v : result.mse)
            if (v != 0.0) {
                ok = false;
                detail << "d1 interval " << iv.interval_index << " mse nonzero; ";
                break;
            }
        if (classify(result) != Sensitivity::Insensitive) {
            ok = false;
            detail << "d1 interval " << iv.interval_index << " classified sensitive; ";
        }
    }
    // The live-population reading must also land insensitive.
    spec.mode = IncidenceMode::dynamic();
    for (const auto& iv : default_sweep_intervals()) {
        if (iv.parameter != "d1")
            continue;
        spec.lo = iv.lo;
        spec.hi = iv.hi;
        spec.step = iv.step;
        if (classify(run_sweep(spec, 2)) != Sensitivity::Insensitive) {
            ok = false;
            detail << "d1 interval " << iv.interval_index << " (live N) classified sensitive; ";
        }
    }

    // Permutation invariance.
    spec.parameter = "gamma";
    spec.lo = 0.01;
    spec.hi = 0.07;
    spec.step = 0.01;
    const SweepResult sorted = run_sweep(spec, 1);
    auto values = spec.grid_values();
    std::reverse(values.begin(), values.end());
    const SweepResult reversed = run_sweep_over(spec, values, 4);
    if (sorted.mean != reversed.mean || sorted.mse != reversed.mse ||
        classify(sorted) != classify(reversed)) {
        ok = false;
        detail << "permutation variance detected; ";
    }

    verdict(9, ok, "sensitivity engine",
            ok ? "degenerate sweeps exactly zero, d1 insensitive in both intervals and both "
                 "incidence modes, reduction permutation-invariant"
               : detail.str());
}

// 10. Golden outputs: one pinned file per subcommand, byte-identical across
// runs and thread counts.
void criterion_10()
{
    struct Golden {
        const char* subcommand;
        const char* file;
        bool threaded; // rerun under different thread counts
    };
    const std::vector<Golden> goldens = {
        {"simulate", "trajectory.csv", false},
        {"equilibria", "equilibria_report.txt", false},
        {"r0", "r0_report.txt", false},
        {"sensitivity", "sweep.csv", true},
        {"heatmap", "heatgrid_long.csv", true},
        {"effectiveness", "effectiveness.csv", false},
        {"discrepancies", "discrepancies.txt", true},
        {"selfcheck", "selfcheck.txt", false},
    };

    const fs::path config = kSourceDir / "configs" / "default.cfg";
    const fs::path golden_dir = kSourceDir / "tests" / "golden";
    const fs::path work = fs::temp_directory_path() / "seirim_acceptance_golden";
    fs::remove_all(work);

    auto slurp = [](const fs::path& p) -> std::string {
        std::ifstream in(p, std::ios::binary);
        if (!in)
            return "<missing " + p.string() + ">";
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };
    auto run_cmd = [&](const std::string& sub, const fs::path& out, int threads) {
        std::ostringstream cmd;
        cmd << "\"" << kBin << "\" " << sub << " --config \"" << config.string() << "\" --out \""
            << out.string() << "\"";
        if (threads > 0)
            cmd << " --threads " << threads;
        cmd << " >/dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.str().c_str()));
    };

    bool ok = true;
    std::ostringstream detail;
    for (const auto& golden : goldens) {
        const fs::path out = work / golden.subcommand;
        if (run_cmd(golden.subcommand, out, -1) != 0) {
            ok = false;
            detail << golden.subcommand << " exited nonzero; ";
            continue;
        }
        const std::string produced = slurp(out / golden.file);
        const std::string pinned = slurp(golden_dir / golden.subcommand / golden.file);
        if (produced != pinned) {
            ok = false;
            detail << golden.subcommand << "/" << golden.file << " differs from golden; ";
        }
        if (golden.threaded) {
            const fs::path out1 = work / (std::string(golden.subcommand) + "_t1");
            const fs::path out4 = work / (std::string(golden.subcommand) + "_t4");
            if (run_cmd(golden.subcommand, out1, 1) != 0 || run_cmd(golden.subcommand, out4, 4) != 0) {
                ok = false;
                detail << golden.subcommand << " threaded rerun exited nonzero; ";
                continue;
            }
            if (slurp(out1 / golden.file) != slurp(out4 / golden.file) ||
                slurp(out1 / golden.file) != produced) {
                ok = false;
                detail << golden.subcommand << " output depends on thread count; ";
            }
        }
    }
    fs::remove_all(work);
    verdict(10, ok, "golden outputs",
            ok ? "8 subcommands byte-identical to pinned outputs and across thread counts"
               : detail.str());
}

} // namespace

int main()
{
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
