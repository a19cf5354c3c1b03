#include "entropy.hpp"

#include <cmath>

namespace msdiff {

double entropy(const MixtureState& state, const Grid1D& grid) {
    double sum = 0.0;
    for (int k = 0; k < state.num_cells(); ++k) {
        for (int i = 0; i < state.n_species(); ++i) {
            const double c = state.concentrations(k, i);
            if (c > 0.0) sum += c * (std::log(c) - 1.0);
            // s ln s -> 0 as s -> 0+, so empty species contribute nothing
        }
    }
    return sum * grid.dx;
}

double dissipation_rate(const MixtureState& state, const FluxSolution& fluxes,
                        const Grid1D& grid, const BinaryDiffusivities& d) {
    const Matrix face_c = face_values(state, grid);
    double sum = 0.0;
    Eigen::VectorXd c(state.n_species()), m(state.n_species());
    for (int f = 0; f < grid.num_interior_faces(); ++f) {
        c = face_c.row(f);
        m = fluxes.m.row(f + 1);
        sum += dissipation_density(c, m, d);
    }
    return sum * grid.dx;
}

double flux_pairing(const FluxSolution& fluxes, const Matrix& grad_sqrt_interior,
                    const Grid1D& grid) {
    double sum = 0.0;
    for (int f = 0; f < grad_sqrt_interior.rows(); ++f)
        sum += fluxes.m.row(f + 1).dot(grad_sqrt_interior.row(f));
    return -2.0 * sum * grid.dx;
}

std::vector<double> anomalous_residual(const Trajectory& trajectory) {
    const auto& ledger = trajectory.ledger;
    std::vector<double> r(ledger.size(), 0.0);
    if (ledger.empty()) return r;
    const double h0 = ledger.front().entropy;
    double cumulative = 0.0;
    for (size_t k = 1; k < ledger.size(); ++k) {
        const double dt = ledger[k].t - ledger[k - 1].t;
        cumulative += 0.5 * dt * (ledger[k].dissipation_rate + ledger[k - 1].dissipation_rate);
        r[k] = ledger[k].entropy + cumulative - h0;
    }
    return r;
}

double Trajectory::sup_abs_residual() const {
    double sup = 0.0;
    for (const auto& row : ledger) sup = std::max(sup, std::abs(row.residual));
    return sup;
}

} // namespace msdiff
