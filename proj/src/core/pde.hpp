#pragma once

#include "entropy.hpp"

namespace msdiff {

enum class Integrator { Euler, Heun };

enum class PresetKind { CosinePerturbation, SmoothedStep, DuncanToor, Custom };

/// Initial-data description. Presets are analytic profiles evaluated at cell
/// centers, so a scenario can be re-gridded for refinement studies; Custom
/// carries an explicit per-cell table and cannot be refined.
struct InitialPreset {
    PresetKind kind = PresetKind::CosinePerturbation;
    std::vector<double> amplitudes; // cosine: c_i = 1/n + a_i cos(pi x / L), sum a_i = 0
    double interface_width = 0.0;   // smoothed_step & duncan_toor transition length
    Matrix table;                   // custom: (num_cells x n)
};

struct Scenario {
    Grid1D grid;
    int n_species = 2;
    BinaryDiffusivities d;
    InitialPreset initial;
    double t_end = 0.0;
    double cfl = 0.25;
    Integrator integrator = Integrator::Euler;
    int output_stride = 0;       // 0 = auto (about 256 snapshots per run)
    double flux_truncation = 0.0; // fault injection: scale fluxes by (1 - f)
};

MixtureState initial_state(const Scenario& scenario);

/// Parabolic step bound dt = cfl dx^2 / (2 D_eff) with D_eff = max_ij D_ij.
double stable_dt(const Grid1D& grid, const BinaryDiffusivities& d, double cfl);

struct StepResult {
    MixtureState state;
    FluxSolution fluxes; ///< fluxes evaluated at the *incoming* state
    double repair_magnitude = 0.0;
};

/// One conservative finite-volume update
///   c_k <- c_k - (dt/dx) (J_{k+1/2} - J_{k-1/2}),
/// followed by a simplex projection whose magnitude is reported. A repair
/// above 1e-6 raises Stability (the step bound was too loose).
StepResult step(const MixtureState& state, const Grid1D& grid, const BinaryDiffusivities& d,
                double dt, Integrator integrator = Integrator::Euler,
                double flux_truncation = 0.0);

/// Advance from 0 to t_end at fixed dt = stable_dt (final step shortened to
/// land on t_end exactly). Records the entropy ledger at every step and
/// snapshots every output_stride steps plus the final state.
Trajectory simulate(const Scenario& scenario);

} // namespace msdiff
