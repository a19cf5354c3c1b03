#pragma once

#include "friction.hpp"

#include <vector>

namespace msdiff {

struct Snapshot {
    double time = 0.0;
    MixtureState state;
    FluxSolution fluxes;
};

/// One row of the entropy ledger, recorded at every time step.
struct LedgerEntry {
    double t = 0.0;
    double entropy = 0.0;
    double dissipation_rate = 0.0;
    double cumulative_dissipation = 0.0; // trapezoidal integral of the rate
    double residual = 0.0;               // H(t) + cumulative - H(0)
    double pairing_gap = 0.0;
    double min_concentration = 0.0;
    double repair_magnitude = 0.0; // simplex projection applied after the step into t
    Vector masses;                 // per-species totals sum_k c_ki dx
};

struct Trajectory {
    Grid1D grid;
    BinaryDiffusivities d;
    std::vector<Snapshot> snapshots; // strided, plus the final state
    std::vector<LedgerEntry> ledger; // every step
    double max_uphill_product = 0.0; // max over (face, species, t) of J_i * grad(c_i)
    double max_repair = 0.0;

    bool uphill_detected() const { return max_uphill_product > 1e-9; }
    double initial_entropy() const { return ledger.empty() ? 0.0 : ledger.front().entropy; }
    double sup_abs_residual() const;
};

} // namespace msdiff
