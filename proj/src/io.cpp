#include "seirim/io.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace seirim {

std::string fmt_full(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj)
{
    out << kTrajectoryHeader << "\n";
    for (std::size_t row = 0; row < traj.times.size(); ++row) {
        out << fmt_full(traj.times[row]);
        for (int i = 0; i < kCompartments; ++i)
            out << "," << fmt_full(traj.states[row][i]);
        out << "\n";
    }
}

void write_equilibrium_report(std::ostream& out, const std::string& label,
                              const EquilibriumReport& report)
{
    out << "[" << label << "]\n";
    out << "kind = " << equilibrium_kind_label(report.kind) << "\n";
    for (int i = 0; i < kCompartments; ++i)
        out << compartment_label(i) << " = " << fmt_full(report.state[i]) << "\n";
    out << "residual_norm = " << fmt_full(report.residual_norm) << "\n";
    out << "stability = " << stability_label(report.stability) << "\n";
    for (std::size_t i = 0; i < report.eigenvalues.size(); ++i)
        out << "eigenvalue_" << i + 1 << " = " << fmt_full(report.eigenvalues[i].real()) << " "
            << fmt_full(report.eigenvalues[i].imag()) << "\n";
}

void write_eigenvalue_csv(std::ostream& out, const std::vector<std::complex<double>>& eigenvalues)
{
    out << "re,im\n";
    for (const auto& ev : eigenvalues)
        out << fmt_full(ev.real()) << "," << fmt_full(ev.imag()) << "\n";
}

void write_sweep_csv(std::ostream& out, const SweepResult& result)
{
    out << "t";
    for (double v : result.grid)
        out << ",I@" << fmt_full(v);
    out << ",mean,mse\n";
    for (std::size_t j = 0; j < result.times.size(); ++j) {
        out << fmt_full(result.times[j]);
        for (std::size_t n = 0; n < result.grid.size(); ++n)
            out << "," << fmt_full(result.infected[n][j]);
        out << "," << fmt_full(result.mean[j]) << "," << fmt_full(result.mse[j]) << "\n";
    }
}

void write_sweep_metadata(std::ostream& out, const SweepSpec& spec, const SweepResult& result,
                          Sensitivity verdict, double peak_threshold, double tail_threshold)
{
    out << "[sweep]\n";
    out << "parameter = " << spec.parameter << "\n";
    out << "lo = " << fmt_full(spec.lo) << "\n";
    out << "hi = " << fmt_full(spec.hi) << "\n";
    out << "step = " << fmt_full(spec.step) << "\n";
    out << "grid_points = " << result.grid.size() << "\n";
    out << "t0 = " << fmt_full(spec.integration.t0) << "\n";
    out << "t_end = " << fmt_full(spec.integration.t_end) << "\n";
    out << "record_every = " << fmt_full(spec.integration.record_every) << "\n";
    double peak_mse = 0.0, peak_mean = 0.0;
    for (double v : result.mse)
        peak_mse = std::max(peak_mse, v);
    for (double v : result.mean)
        peak_mean = std::max(peak_mean, v);
    out << "peak_mse = " << fmt_full(peak_mse) << "\n";
    out << "peak_mean = " << fmt_full(peak_mean) << "\n";
    out << "tail_mse = " << fmt_full(result.mse.back()) << "\n";
    out << "peak_threshold = " << fmt_full(peak_threshold) << "\n";
    out << "tail_threshold = " << fmt_full(tail_threshold) << "\n";
    out << "classification = " << sensitivity_label(verdict) << "\n";
}

void write_heatgrid_long(std::ostream& out, const HeatGrid& grid)
{
    out << "x,y,r0,region\n";
    for (std::size_t iy = 0; iy < grid.y_values.size(); ++iy)
        for (std::size_t ix = 0; ix < grid.x_values.size(); ++ix) {
            const std::size_t cell = grid.index(ix, iy);
            out << fmt_full(grid.x_values[ix]) << "," << fmt_full(grid.y_values[iy]) << ","
                << fmt_full(grid.r0[cell]) << "," << region_label(grid.region[cell]) << "\n";
        }
}

void write_heatgrid_matrix(std::ostream& out, const HeatGrid& grid)
{
    out << "x";
    for (double x : grid.x_values)
        out << "," << fmt_full(x);
    out << "\n";
    for (std::size_t iy = 0; iy < grid.y_values.size(); ++iy) {
        out << fmt_full(grid.y_values[iy]);
        for (std::size_t ix = 0; ix < grid.x_values.size(); ++ix)
            out << "," << fmt_full(grid.r0[grid.index(ix, iy)]);
        out << "\n";
    }
}

void write_effectiveness_csv(std::ostream& out, const std::vector<EffectivenessRow>& rows)
{
    out << kEffectivenessHeader << "\n";
    for (const auto& row : rows) {
        out << row.id << "," << fmt_full(row.combo.eps11) << "," << fmt_full(row.combo.eps12)
            << "," << fmt_full(row.combo.eps21) << "," << fmt_full(row.combo.eps22) << ","
            << fmt_full(row.combo.eps31) << "," << fmt_full(row.combo.eps32) << ","
            << fmt_full(row.r_e) << "," << fmt_full(row.pr) << "," << row.ce_rank << "\n";
    }
}

} // namespace seirim
