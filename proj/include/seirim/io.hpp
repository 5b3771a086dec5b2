#pragma once

// Delimited-text and key/value writers for every export format. All numbers
// are printed with round-trip precision (%.17g) and every file ends with a
// newline.

#include <iosfwd>
#include <string>
#include <vector>

#include "seirim/effectiveness.hpp"
#include "seirim/equilibria.hpp"
#include "seirim/heatmap.hpp"
#include "seirim/integrate.hpp"
#include "seirim/sensitivity.hpp"

namespace seirim {

// Shortest decimal form that parses back to the same double.
std::string fmt_full(double v);

inline constexpr const char* kTrajectoryHeader = "t,S_u,E_u,I_u,R_u,Q_r,S_r,E_r,I_r,R_r";

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

// Key/value block for one equilibrium: state, residual, eigenvalues,
// stability class.
void write_equilibrium_report(std::ostream& out, const std::string& label,
                              const EquilibriumReport& report);

// One `re,im` row per eigenvalue.
void write_eigenvalue_csv(std::ostream& out, const std::vector<std::complex<double>>& eigenvalues);

// Columns t, I@v1, ..., I@vN, mean, mse.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

void write_sweep_metadata(std::ostream& out, const SweepSpec& spec, const SweepResult& result,
                          Sensitivity verdict, double peak_threshold, double tail_threshold);

// Long format: one `x,y,r0,region` row per cell, x fastest.
void write_heatgrid_long(std::ostream& out, const HeatGrid& grid);

// Compact format: header row `x,<x values...>`, then one row per y value
// with the y value leading the r0 cells.
void write_heatgrid_matrix(std::ostream& out, const HeatGrid& grid);

inline constexpr const char* kEffectivenessHeader =
    "id,eps11,eps12,eps21,eps22,eps31,eps32,r_e,pr_percent,ce_rank";

void write_effectiveness_csv(std::ostream& out, const std::vector<EffectivenessRow>& rows);

} // namespace seirim
