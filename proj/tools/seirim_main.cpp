// Command-line surface for the urban-rural SEIR toolkit. Every subcommand
// reads one config file and writes plain-text outputs into --out.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "seirim/config.hpp"
#include "seirim/discrepancy.hpp"
#include "seirim/draws.hpp"
#include "seirim/effectiveness.hpp"
#include "seirim/equilibria.hpp"
#include "seirim/errors.hpp"
#include "seirim/heatmap.hpp"
#include "seirim/io.hpp"
#include "seirim/parallel.hpp"
#include "seirim/sensitivity.hpp"

namespace fs = std::filesystem;
using namespace seirim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct CliContext {
    RunConfig config;
    fs::path out_dir;
    int threads = 0;
    std::uint64_t seed = 42;
};

void write_file(const fs::path& dir, const std::string& name, const std::string& content)
{
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out)
        throw NumericError("cannot write output file: " + (dir / name).string());
    out << content;
}

std::string kv(const std::string& key, const std::string& value)
{
    return key + " = " + value + "\n";
}

void cmd_simulate(const CliContext& ctx)
{
    const RunConfig& cfg = ctx.config;
    RateModifiers mods;
    if (cfg.effectiveness && cfg.effectiveness->apply_to_dynamics)
        mods = rate_modifiers(cfg.effectiveness->combo);

    const Trajectory traj = integrate(cfg.init, cfg.params, cfg.mode, cfg.integration, mods);

    std::ostringstream csv;
    write_trajectory_csv(csv, traj);

    double min_component = traj.states.front().min_component();
    double max_n = 0.0;
    for (const auto& s : traj.states) {
        min_component = std::min(min_component, s.min_component());
        max_n = std::max(max_n, total_population(s));
    }

    std::ostringstream meta;
    meta << "[simulate]\n";
    meta << kv("samples", std::to_string(traj.times.size()));
    meta << kv("t0", fmt_full(traj.times.front()));
    meta << kv("t_end", fmt_full(traj.times.back()));
    meta << kv("initial_population", fmt_full(total_population(traj.states.front())));
    meta << kv("final_population", fmt_full(total_population(traj.states.back())));
    meta << kv("max_population", fmt_full(max_n));
    meta << kv("min_component", fmt_full(min_component));
    meta << kv("steps_accepted", std::to_string(traj.stats.accepted));
    meta << kv("steps_rejected", std::to_string(traj.stats.rejected));
    meta << kv("rhs_evaluations", std::to_string(traj.stats.rhs_evals));
    meta << kv("rates_modified", mods.is_identity() ? "false" : "true");
    meta << "\n[config]\n" << serialize_config(cfg);

    write_file(ctx.out_dir, "trajectory.csv", csv.str());
    write_file(ctx.out_dir, "simulate_summary.txt", meta.str());
    std::cout << "simulate: " << traj.times.size() << " samples -> "
              << (ctx.out_dir / "trajectory.csv").string() << "\n";
}

void cmd_equilibria(const CliContext& ctx)
{
    const RunConfig& cfg = ctx.config;
    const EquilibriumReport dfe = disease_free_equilibrium(cfg.params);
    const InfectedSearch search = infected_equilibria(cfg.params, cfg.mode);

    std::ostringstream report;
    write_equilibrium_report(report, "disease_free", dfe);
    for (std::size_t i = 0; i < search.equilibria.size(); ++i) {
        report << "\n";
        write_equilibrium_report(report, "infected_" + std::to_string(i + 1),
                                 search.equilibria[i]);
    }
    report << "\n[search]\n";
    report << kv("infected_equilibria_found", std::to_string(search.equilibria.size()));
    int note_index = 1;
    for (const auto& note : search.notes)
        report << kv("note_" + std::to_string(note_index++), note);

    write_file(ctx.out_dir, "equilibria_report.txt", report.str());

    std::ostringstream dfe_eigen;
    write_eigenvalue_csv(dfe_eigen, dfe.eigenvalues);
    write_file(ctx.out_dir, "eigenvalues_disease_free.csv", dfe_eigen.str());
    for (std::size_t i = 0; i < search.equilibria.size(); ++i) {
        std::ostringstream eigen;
        write_eigenvalue_csv(eigen, search.equilibria[i].eigenvalues);
        write_file(ctx.out_dir, "eigenvalues_infected_" + std::to_string(i + 1) + ".csv",
                   eigen.str());
    }
    std::cout << "equilibria: disease-free plus " << search.equilibria.size()
              << " infected -> " << (ctx.out_dir / "equilibria_report.txt").string() << "\n";
}

void cmd_r0(const CliContext& ctx)
{
    const RunConfig& cfg = ctx.config;
    const DfeWeights weights = dfe_weights_from_equilibrium(cfg.params);
    const R0Result closed = r0_closed_form(cfg.params, weights);
    const auto decomp = next_generation(cfg.params, weights);
    const double numeric = spectral_radius(decomp.k_matrix);
    const R0Result unit = r0_closed_form(cfg.params, DfeWeights{1.0, 0.0});

    std::ostringstream out;
    out << "[r0]\n";
    out << kv("p1", fmt_full(weights.p1));
    out << kv("p2", fmt_full(weights.p2));
    out << kv("closed_form", fmt_full(closed.value));
    out << kv("closed_form_urban_term", fmt_full(closed.urban_term));
    out << kv("closed_form_rural_term", fmt_full(closed.rural_term));
    out << kv("urban_dominant", closed.urban_dominant ? "true" : "false");
    out << kv("numeric_spectral_radius", fmt_full(numeric));
    out << kv("closed_form_unit_weights", fmt_full(unit.value));
    if (cfg.r0_efficacies) {
        const double baseline = effective_r0(cfg.params, weights, EfficacyCombination::zero());
        const double re = effective_r0(cfg.params, weights, *cfg.r0_efficacies);
        out << kv("effective_r0", fmt_full(re));
        out << kv("percent_reduction",
                  fmt_full(baseline > 0.0 ? 100.0 * (baseline - re) / baseline : 0.0));
    }
    write_file(ctx.out_dir, "r0_report.txt", out.str());
    std::cout << out.str();
}

void cmd_sensitivity(const CliContext& ctx)
{
    const RunConfig& cfg = ctx.config;
    if (!cfg.sweep)
        throw ValidationError("sensitivity: config has no [sweep] section");

    SweepSpec spec;
    spec.parameter = cfg.sweep->parameter;
    spec.lo = cfg.sweep->lo;
    spec.hi = cfg.sweep->hi;
    spec.step = cfg.sweep->step;
    spec.base = cfg.params;
    spec.init = cfg.init;
    spec.mode = cfg.mode;
    spec.integration = cfg.integration;

    const SweepResult result = run_sweep(spec, ctx.threads);
    const Sensitivity verdict =
        classify(result, cfg.sweep->peak_threshold, cfg.sweep->tail_threshold);

    std::ostringstream csv, meta;
    write_sweep_csv(csv, result);
    write_sweep_metadata(meta, spec, result, verdict, cfg.sweep->peak_threshold,
                         cfg.sweep->tail_threshold);
    write_file(ctx.out_dir, "sweep.csv", csv.str());
    write_file(ctx.out_dir, "sweep_meta.txt", meta.str());
    std::cout << "sensitivity: " << spec.parameter << " over " << result.grid.size()
              << " values -> " << sensitivity_label(verdict) << "\n";
}

void cmd_heatmap(const CliContext& ctx)
{
    const RunConfig& cfg = ctx.config;
    if (!cfg.grid)
        throw ValidationError("heatmap: config has no [grid] section");

    GridSpec spec;
    spec.x = cfg.grid->x;
    spec.y = cfg.grid->y;
    spec.base = cfg.params;
    spec.weights = cfg.grid->weights;
    spec.explicit_weights = cfg.grid->explicit_weights;

    const HeatGrid grid = compute_grid(spec, ctx.threads);

    std::size_t stable = 0, endemic = 0, degenerate = 0;
    for (Region r : grid.region) {
        if (r == Region::DfeStable)
            ++stable;
        else if (r == Region::Endemic)
            ++endemic;
        else
            ++degenerate;
    }

    std::ostringstream long_csv, matrix_csv, meta;
    write_heatgrid_long(long_csv, grid);
    write_heatgrid_matrix(matrix_csv, grid);
    meta << "[heatmap]\n";
    meta << kv("x_parameter", spec.x.parameter);
    meta << kv("y_parameter", spec.y.parameter);
    meta << kv("cells", std::to_string(grid.r0.size()));
    meta << kv("dfe_stable_cells", std::to_string(stable));
    meta << kv("endemic_cells", std::to_string(endemic));
    meta << kv("degenerate_cells", std::to_string(degenerate));
    write_file(ctx.out_dir, "heatgrid_long.csv", long_csv.str());
    write_file(ctx.out_dir, "heatgrid_matrix.csv", matrix_csv.str());
    write_file(ctx.out_dir, "heatgrid_meta.txt", meta.str());
    std::cout << "heatmap: " << grid.r0.size() << " cells, " << stable << " with r0 < 1\n";
}

void cmd_effectiveness(const CliContext& ctx)
{
    const RunConfig& cfg = ctx.config;
    const DfeWeights weights = dfe_weights_from_equilibrium(cfg.params);
    std::vector<EfficacyCombination> combos;
    if (cfg.effectiveness && !cfg.effectiveness->combos_file.empty())
        combos = load_combinations(cfg.effectiveness->combos_file);
    else
        combos = builtin_combinations();
    const auto rows = effectiveness_table(cfg.params, weights, combos);

    std::ostringstream csv;
    write_effectiveness_csv(csv, rows);
    write_file(ctx.out_dir, "effectiveness.csv", csv.str());
    std::cout << "effectiveness: " << rows.size() << " combinations -> "
              << (ctx.out_dir / "effectiveness.csv").string() << "\n";
}

void cmd_discrepancies(const CliContext& ctx)
{
    const auto entries = build_discrepancy_report(ctx.config, ctx.threads);
    std::ostringstream out;
    write_discrepancy_report(out, entries);
    write_file(ctx.out_dir, "discrepancies.txt", out.str());
    std::cout << "discrepancies: " << entries.size() << " claims -> "
              << (ctx.out_dir / "discrepancies.txt").string() << "\n";
}

// Seeded invariant checks over random draws; fails the process when any
// property is violated.
int cmd_selfcheck(const CliContext& ctx)
{
    std::ostringstream out;
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        out << (ok ? "[pass] " : "[FAIL] ") << name << ": " << detail << "\n";
        all_ok = all_ok && ok;
    };

    {
        Rng rng(ctx.seed);
        int checked = 0, dominance_skipped = 0;
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const ModelParameters params = random_parameters(rng);
            const DfeWeights weights = dfe_weights_from_equilibrium(params);
            const R0Result closed = r0_closed_form(params, weights);
            const double numeric = spectral_radius(next_generation(params, weights).k_matrix);
            if (!closed.urban_dominant) {
                ++dominance_skipped;
                continue;
            }
            ++checked;
            worst = std::max(worst,
                             std::abs(closed.value - numeric) / (1.0 + closed.value));
        }
        std::ostringstream detail;
        detail << checked << " draws, worst relative gap " << fmt_full(worst) << ", "
               << dominance_skipped << " rural-dominant draws reported";
        report("closed-form vs numeric r0", worst < 1e-10, detail.str());
    }
    {
        Rng rng(ctx.seed + 1);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const ModelParameters params = random_parameters(rng);
            const auto dfe = disease_free_equilibrium(params);
            worst = std::max(worst, dfe.residual_norm / params.b1);
        }
        report("disease-free residual", worst < 1e-9,
               "worst residual/b1 = " + fmt_full(worst));
    }
    {
        Rng rng(ctx.seed + 2);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const ModelParameters params = random_parameters(rng);
            StateVector state;
            for (int c = 0; c < kCompartments; ++c)
                state[c] = rng.uniform(1.0, 1000.0);
            const Matrix9 analytic = jacobian(state, params, IncidenceMode::dynamic());
            for (int col = 0; col < kCompartments; ++col) {
                const double h = 1e-6 * (1.0 + std::abs(state[col]));
                StateVector hi = state, lo = state;
                hi[col] += h;
                lo[col] -= h;
                const auto f_hi = rhs(hi, params, IncidenceMode::dynamic()).to_array();
                const auto f_lo = rhs(lo, params, IncidenceMode::dynamic()).to_array();
                for (int row = 0; row < kCompartments; ++row) {
                    const double fd =
                        (f_hi[static_cast<std::size_t>(row)] - f_lo[static_cast<std::size_t>(row)]) /
                        (2.0 * h);
                    const double err = std::abs(fd - analytic(row, col)) /
                                       (1.0 + std::abs(analytic(row, col)));
                    worst = std::max(worst, err);
                }
            }
        }
        report("jacobian vs central differences", worst < 1e-6,
               "worst relative entry error = " + fmt_full(worst));
    }
    {
        Rng rng(ctx.seed + 3);
        bool ok = true;
        for (int i = 0; i < 200 && ok; ++i) {
            const ModelParameters params = random_parameters(rng);
            StateVector state = random_nonnegative_state(rng, 1000.0);
            for (int c = 0; c < kCompartments; ++c)
                if (rng.uniform01() < 0.4)
                    state[c] = 0.0;
            for (const auto& [index, value] :
                 boundary_inflow_check(state, params, IncidenceMode::dynamic()))
                ok = ok && value >= 0.0;
        }
        report("boundary inflow non-negativity", ok, "200 random boundary states");
    }
    {
        SweepSpec spec;
        spec.parameter = "mu_c";
        spec.lo = 0.1;
        spec.hi = 0.2;
        spec.step = 0.02;
        spec.base = ctx.config.params;
        spec.init = ctx.config.init;
        spec.mode = ctx.config.mode;
        spec.integration.t0 = 0.0;
        spec.integration.t_end = 50.0;
        spec.integration.method = Rk4Fixed{0.1};
        spec.integration.record_every = 1.0;
        const SweepResult sorted = run_sweep(spec, ctx.threads);

        auto values = spec.grid_values();
        std::reverse(values.begin(), values.end());
        const SweepResult shuffled = run_sweep_over(spec, values, ctx.threads);
        bool identical = sorted.mean == shuffled.mean && sorted.mse == shuffled.mse;

        // Second route: E[X^2] - E[X]^2.
        double worst = 0.0;
        for (std::size_t j = 0; j < sorted.times.size(); ++j) {
            double sq = 0.0;
            for (std::size_t n = 0; n < sorted.grid.size(); ++n)
                sq += sorted.infected[n][j] * sorted.infected[n][j];
            sq /= static_cast<double>(sorted.grid.size());
            const double alt = sq - sorted.mean[j] * sorted.mean[j];
            worst = std::max(worst, std::abs(alt - sorted.mse[j]) / (1.0 + sorted.mse[j]));
        }
        report("sweep mse identity and permutation invariance", identical && worst < 1e-9,
               "identity gap " + fmt_full(worst) +
                   (identical ? ", reduction order-independent" : ", reduction ORDER-DEPENDENT"));
    }
    {
        Rng rng(ctx.seed + 4);
        const DfeWeights weights = dfe_weights_from_equilibrium(ctx.config.params);
        const double r0 = effective_r0(ctx.config.params, weights, EfficacyCombination::zero());
        bool ok = r0 > 0.0;
        for (int i = 0; i < 100 && ok; ++i) {
            EfficacyCombination a;
            double* a_fields[6] = {&a.eps11, &a.eps12, &a.eps21, &a.eps22, &a.eps31, &a.eps32};
            for (double* f : a_fields)
                *f = rng.uniform(0.0, 0.9);
            EfficacyCombination b = a;
            double* b_fields[6] = {&b.eps11, &b.eps12, &b.eps21, &b.eps22, &b.eps31, &b.eps32};
            bool bumped = false;
            while (!bumped)
                for (int f = 0; f < 6; ++f)
                    if (rng.uniform01() < 0.5) {
                        *b_fields[f] += (0.95 - *b_fields[f]) * rng.uniform(0.1, 1.0);
                        bumped = true;
                    }
            const double pr_a = 100.0 * (r0 - effective_r0(ctx.config.params, weights, a)) / r0;
            const double pr_b = 100.0 * (r0 - effective_r0(ctx.config.params, weights, b)) / r0;
            ok = pr_a < pr_b;
        }
        report("effectiveness monotone dominance", ok, "100 dominated pairs");
    }

    write_file(ctx.out_dir, "selfcheck.txt", out.str());
    std::cout << out.str();
    return all_ok ? kExitOk : kExitNumeric;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"urban-rural SEIR model: simulation, equilibria, reproduction number, "
                 "sensitivity, heat grids, intervention effectiveness"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int threads_flag = -1;
    std::int64_t seed_flag = -1;

    app.add_option("--config", config_path, "path to the run configuration file")
        ->envname("SEIRIM_CONFIG")
        ->required();
    app.add_option("--out", out_dir, "output directory (created on demand)")
        ->envname("SEIRIM_OUT");
    app.add_option("--threads", threads_flag, "worker threads, 0 = hardware default")
        ->envname("SEIRIM_THREADS");
    app.add_option("--seed", seed_flag, "seed override for randomized checks")
        ->envname("SEIRIM_SEED");

    auto* simulate = app.add_subcommand("simulate", "integrate the model and export the trajectory");
    auto* equilibria = app.add_subcommand("equilibria", "disease-free and infected equilibria");
    auto* r0 = app.add_subcommand("r0", "reproduction number, closed form and numeric");
    auto* sensitivity = app.add_subcommand("sensitivity", "one-parameter sweep with mse curves");
    auto* heatmap = app.add_subcommand("heatmap", "two-parameter r0 grid");
    auto* effectiveness = app.add_subcommand("effectiveness", "intervention combination ranking");
    auto* discrepancies = app.add_subcommand("discrepancies", "recompute published values under "
                                                              "every implemented convention");
    auto* selfcheck = app.add_subcommand("selfcheck", "seeded invariant checks");

    CLI11_PARSE(app, argc, argv);

    try {
        CliContext ctx;
        ctx.config = load_config(config_path);
        ctx.out_dir = out_dir;
        ctx.threads = threads_flag >= 0 ? threads_flag : ctx.config.threads;
        ctx.seed = seed_flag >= 0 ? static_cast<std::uint64_t>(seed_flag) : ctx.config.seed;

        if (simulate->parsed())
            cmd_simulate(ctx);
        else if (equilibria->parsed())
            cmd_equilibria(ctx);
        else if (r0->parsed())
            cmd_r0(ctx);
        else if (sensitivity->parsed())
            cmd_sensitivity(ctx);
        else if (heatmap->parsed())
            cmd_heatmap(ctx);
        else if (effectiveness->parsed())
            cmd_effectiveness(ctx);
        else if (discrepancies->parsed())
            cmd_discrepancies(ctx);
        else if (selfcheck->parsed())
            return cmd_selfcheck(ctx);
        return kExitOk;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
