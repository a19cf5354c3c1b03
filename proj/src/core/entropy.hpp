#pragma once

#include "trajectory.hpp"

namespace msdiff {

/// Entropy functional H(c) = sum_i int c_i (ln c_i - 1) dx, with the
/// convention 0 (ln 0 - 1) = 0. Nonpositive on the simplex.
double entropy(const MixtureState& state, const Grid1D& grid);

/// Instantaneous dissipation: sum over interior faces of the dissipation
/// density times dx (midpoint face quadrature). Nonnegative by construction.
double dissipation_rate(const MixtureState& state, const FluxSolution& fluxes,
                        const Grid1D& grid, const BinaryDiffusivities& d);

/// The pairing -2 sum_i sum_faces m_i (grad sqrt(c_i)) dx. Equals the
/// dissipation rate whenever m solves the friction system; the difference is
/// recorded as pairing_gap.
double flux_pairing(const FluxSolution& fluxes, const Matrix& grad_sqrt_interior,
                    const Grid1D& grid);

/// Anomalous-dissipation residual time series recomputed from the ledger's
/// entropy and rate columns: r(t) = H(t) + trapz(D, 0..t) - H(0).
std::vector<double> anomalous_residual(const Trajectory& trajectory);

} // namespace msdiff
