#pragma once

#include "common.hpp"

namespace msdiff {

/// Uniform 1D cell-centered grid on [0, domain_length].
///
/// Cell centers sit at (k + 1/2) dx; interior faces at k dx for
/// k = 1..num_cells-1. Boundary faces carry no flux.
struct Grid1D {
    int num_cells = 0;
    double domain_length = 0.0;
    double dx = 0.0;

    Grid1D() = default;
    Grid1D(int cells, double length);

    double cell_center(int k) const { return (k + 0.5) * dx; }
    /// Interior face f (0-based, f = 0..num_cells-2) sits at x = (f+1) dx.
    double face_position(int f) const { return (f + 1) * dx; }
    int num_interior_faces() const { return num_cells - 1; }
};

/// Cell-averaged mass fractions on a grid. Each row is a point on the
/// probability simplex: c >= 0, sum_i c_i = 1.
struct MixtureState {
    Matrix concentrations; // (num_cells x n_species)
    double time = 0.0;

    int num_cells() const { return static_cast<int>(concentrations.rows()); }
    int n_species() const { return static_cast<int>(concentrations.cols()); }
};

/// Symmetric positive binary-interaction coefficients D_ij (diagonal unused).
struct BinaryDiffusivities {
    Matrix d; // (n x n)

    BinaryDiffusivities() = default;
    explicit BinaryDiffusivities(Matrix values);

    int n_species() const { return static_cast<int>(d.rows()); }
    double operator()(int i, int j) const { return d(i, j); }
    double max_coefficient() const;
};

struct SimplexDiagnostics {
    double min_concentration = 0.0;
    double max_sum_deviation = 0.0;
    int negative_cell_count = 0;
};

/// Report min c, worst per-cell deviation of sum_i c_i from 1, and the number
/// of cells holding any negative entry. Never mutates.
SimplexDiagnostics validate_state(const MixtureState& state);

/// Repair floating-point drift: clip negatives to zero, renormalize each row.
/// Idempotent on valid states. A row with no positive mass cannot be repaired
/// and raises DegenerateCell.
MixtureState project_to_simplex(const Matrix& raw, double time = 0.0);

/// Componentwise arithmetic mean of the two neighbor cells at every interior
/// face. Means of simplex points stay on the simplex exactly.
Matrix face_values(const MixtureState& state, const Grid1D& grid);

/// Central difference of sqrt(c_i) at every interior face:
/// (sqrt(c_R) - sqrt(c_L)) / dx, one row per interior face.
/// Boundary faces are omitted; they carry zero flux by the no-flux condition.
Matrix face_grad_sqrt(const MixtureState& state, const Grid1D& grid);

} // namespace msdiff
