#include "mixture.hpp"

#include <cmath>
#include <string>

namespace msdiff {

Grid1D::Grid1D(int cells, double length) : num_cells(cells), domain_length(length) {
    if (cells < 2)
        raise(ErrorCode::Config, "grid needs at least 2 cells, got " + std::to_string(cells));
    if (!(length > 0.0))
        raise(ErrorCode::Config, "domain length must be positive, got " + std::to_string(length));
    dx = length / cells;
}

BinaryDiffusivities::BinaryDiffusivities(Matrix values) : d(std::move(values)) {
    const int n = n_species();
    if (d.rows() != d.cols() || n < 2)
        raise(ErrorCode::Config, "diffusivity matrix must be square with n >= 2");
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (d(i, j) != d(j, i))
                raise(ErrorCode::Config, "d." + std::to_string(i + 1) + "." + std::to_string(j + 1) +
                                             " is not symmetric");
            if (!(d(i, j) > 0.0))
                raise(ErrorCode::Config, "d." + std::to_string(i + 1) + "." + std::to_string(j + 1) +
                                             " must be positive");
        }
    }
}

double BinaryDiffusivities::max_coefficient() const {
    const int n = n_species();
    double m = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) m = std::max(m, d(i, j));
    return m;
}

SimplexDiagnostics validate_state(const MixtureState& state) {
    if (state.concentrations.size() == 0)
        raise(ErrorCode::Structural, "state has no cells");
    SimplexDiagnostics diag;
    diag.min_concentration = state.concentrations.minCoeff();
    diag.max_sum_deviation = 0.0;
    diag.negative_cell_count = 0;
    for (int k = 0; k < state.num_cells(); ++k) {
        const double sum = state.concentrations.row(k).sum();
        diag.max_sum_deviation = std::max(diag.max_sum_deviation, std::abs(sum - 1.0));
        if ((state.concentrations.row(k).array() < 0.0).any()) ++diag.negative_cell_count;
    }
    return diag;
}

MixtureState project_to_simplex(const Matrix& raw, double time) {
    MixtureState out;
    out.concentrations = raw.cwiseMax(0.0);
    out.time = time;
    for (int k = 0; k < out.num_cells(); ++k) {
        const double sum = out.concentrations.row(k).sum();
        if (!(sum > 0.0))
            raise(ErrorCode::DegenerateCell,
                  "cell " + std::to_string(k) + " has no positive mass to renormalize");
        out.concentrations.row(k) /= sum;
    }
    return out;
}

Matrix face_values(const MixtureState& state, const Grid1D& grid) {
    if (state.num_cells() != grid.num_cells)
        raise(ErrorCode::Structural, "state/grid cell count mismatch");
    const int nf = grid.num_interior_faces();
    Matrix face(nf, state.n_species());
    for (int f = 0; f < nf; ++f)
        face.row(f) = 0.5 * (state.concentrations.row(f) + state.concentrations.row(f + 1));
    return face;
}

Matrix face_grad_sqrt(const MixtureState& state, const Grid1D& grid) {
    if (state.num_cells() != grid.num_cells)
        raise(ErrorCode::Structural, "state/grid cell count mismatch");
    const int nf = grid.num_interior_faces();
    Matrix grad(nf, state.n_species());
    const double inv_dx = 1.0 / grid.dx;
    for (int f = 0; f < nf; ++f) {
        grad.row(f) = (state.concentrations.row(f + 1).cwiseMax(0.0).cwiseSqrt() -
                       state.concentrations.row(f).cwiseMax(0.0).cwiseSqrt()) *
                      inv_dx;
    }
    return grad;
}

} // namespace msdiff
