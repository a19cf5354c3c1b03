#include "pde.hpp"

#include <cmath>
#include <sstream>

namespace msdiff {

namespace {

constexpr double kRepairStabilityLimit = 1e-6;
constexpr int kAutoSnapshotTarget = 256;

Matrix cosine_profile(const Scenario& sc) {
    const int n = sc.n_species;
    const auto& a = sc.initial.amplitudes;
    if (static_cast<int>(a.size()) != n)
        raise(ErrorCode::Config, "cosine preset needs one amplitude per species");
    double sum_a = 0.0;
    for (double ai : a) sum_a += ai;
    if (std::abs(sum_a) > 1e-12)
        raise(ErrorCode::Config, "cosine amplitudes must sum to zero to stay on the simplex");
    for (double ai : a)
        if (std::abs(ai) > 1.0 / n)
            raise(ErrorCode::Config, "cosine amplitude exceeds 1/n; concentrations would leave [0,1]");

    Matrix c(sc.grid.num_cells, n);
    for (int k = 0; k < sc.grid.num_cells; ++k) {
        const double x = sc.grid.cell_center(k);
        const double mode = std::cos(M_PI * x / sc.grid.domain_length);
        for (int i = 0; i < n; ++i) c(k, i) = 1.0 / n + a[i] * mode;
    }
    return c;
}

Matrix smoothed_step_profile(const Scenario& sc, double width) {
    if (sc.n_species != 2)
        raise(ErrorCode::Config, "smoothed_step preset is defined for 2 species");
    Matrix c(sc.grid.num_cells, 2);
    const double mid = 0.5 * sc.grid.domain_length;
    for (int k = 0; k < sc.grid.num_cells; ++k) {
        const double x = sc.grid.cell_center(k);
        c(k, 0) = 0.5 - 0.25 * std::tanh((x - mid) / width);
        c(k, 1) = 1.0 - c(k, 0);
    }
    return c;
}

// Two-bulb analogue collapsed to 1D: (0.8, 0.2, 0) on the left,
// (0, 0.2, 0.8) on the right, tanh transition of the given width.
Matrix duncan_toor_profile(const Scenario& sc, double width) {
    if (sc.n_species != 3)
        raise(ErrorCode::Config, "duncan_toor preset is defined for 3 species");
    Matrix c(sc.grid.num_cells, 3);
    const double mid = 0.5 * sc.grid.domain_length;
    for (int k = 0; k < sc.grid.num_cells; ++k) {
        const double x = sc.grid.cell_center(k);
        const double s = 0.5 * (1.0 - std::tanh((x - mid) / width));
        c(k, 0) = 0.8 * s;
        c(k, 1) = 0.2;
        c(k, 2) = 0.8 * (1.0 - s);
    }
    return c;
}

} // namespace

MixtureState initial_state(const Scenario& scenario) {
    Matrix c;
    const double width = scenario.initial.interface_width > 0.0
                             ? scenario.initial.interface_width
                             : 2.0 * scenario.grid.dx;
    switch (scenario.initial.kind) {
        case PresetKind::CosinePerturbation: c = cosine_profile(scenario); break;
        case PresetKind::SmoothedStep: c = smoothed_step_profile(scenario, width); break;
        case PresetKind::DuncanToor: c = duncan_toor_profile(scenario, width); break;
        case PresetKind::Custom:
            c = scenario.initial.table;
            if (c.rows() != scenario.grid.num_cells || c.cols() != scenario.n_species)
                raise(ErrorCode::Config, "custom initial table shape does not match grid/species");
            break;
    }

    MixtureState state{std::move(c), 0.0};
    const SimplexDiagnostics diag = validate_state(state);
    if (diag.min_concentration < 0.0 || diag.max_sum_deviation > 1e-12)
        raise(ErrorCode::Config, "initial preset leaves the simplex (min c = " +
                                     std::to_string(diag.min_concentration) + ")");
    return state;
}

double stable_dt(const Grid1D& grid, const BinaryDiffusivities& d, double cfl) {
    if (!(cfl > 0.0 && cfl <= 1.0))
        raise(ErrorCode::Config, "cfl must lie in (0, 1]");
    return cfl * grid.dx * grid.dx / (2.0 * d.max_coefficient());
}

namespace {

Matrix conservative_update(const MixtureState& state, const Matrix& j, const Grid1D& grid,
                           double dt) {
    Matrix out = state.concentrations;
    const double lambda = dt / grid.dx;
    for (int k = 0; k < grid.num_cells; ++k)
        out.row(k) -= lambda * (j.row(k + 1) - j.row(k));
    return out;
}

MixtureState project_checked(const Matrix& raw, double time, double* repair) {
    if (!raw.allFinite())
        raise(ErrorCode::Stability, "state became non-finite; reduce cfl");
    MixtureState projected = project_to_simplex(raw, time);
    *repair = (projected.concentrations - raw).cwiseAbs().maxCoeff();
    if (*repair > kRepairStabilityLimit) {
        std::ostringstream msg;
        msg << "simplex repair " << *repair << " exceeds " << kRepairStabilityLimit
            << "; the scheme is unstable, reduce cfl";
        raise(ErrorCode::Stability, msg.str());
    }
    return projected;
}

void truncate_fluxes(FluxSolution* fluxes, double fraction) {
    if (fraction == 0.0) return;
    fluxes->m *= (1.0 - fraction);
    fluxes->j *= (1.0 - fraction);
}

} // namespace

StepResult step(const MixtureState& state, const Grid1D& grid, const BinaryDiffusivities& d,
                double dt, Integrator integrator, double flux_truncation) {
    StepResult result;
    result.fluxes = flux_from_state(state, grid, d);
    truncate_fluxes(&result.fluxes, flux_truncation);

    const double t_new = state.time + dt;
    if (integrator == Integrator::Euler) {
        result.state =
            project_checked(conservative_update(state, result.fluxes.j, grid, dt), t_new,
                            &result.repair_magnitude);
        return result;
    }

    // Heun: average the flux divergence of the predictor and the corrector
    // stage; the effective flux (J1 + J2)/2 keeps the update conservative.
    double stage_repair = 0.0;
    const MixtureState predictor = project_checked(
        conservative_update(state, result.fluxes.j, grid, dt), t_new, &stage_repair);
    FluxSolution stage2 = flux_from_state(predictor, grid, d);
    truncate_fluxes(&stage2, flux_truncation);
    const Matrix mean_j = 0.5 * (result.fluxes.j + stage2.j);
    result.state = project_checked(conservative_update(state, mean_j, grid, dt), t_new,
                                   &result.repair_magnitude);
    return result;
}

namespace {

LedgerEntry make_ledger_entry(const MixtureState& state, const FluxSolution& fluxes,
                              const Grid1D& grid, const BinaryDiffusivities& d, double t) {
    LedgerEntry entry;
    entry.t = t;
    entry.entropy = entropy(state, grid);
    entry.dissipation_rate = dissipation_rate(state, fluxes, grid, d);
    entry.pairing_gap =
        std::abs(flux_pairing(fluxes, face_grad_sqrt(state, grid), grid) - entry.dissipation_rate);
    entry.min_concentration = state.concentrations.minCoeff();
    entry.masses = state.concentrations.colwise().sum() * grid.dx;
    return entry;
}

double max_uphill(const MixtureState& state, const FluxSolution& fluxes, const Grid1D& grid) {
    double worst = 0.0;
    const double inv_dx = 1.0 / grid.dx;
    for (int f = 0; f < grid.num_interior_faces(); ++f) {
        for (int i = 0; i < state.n_species(); ++i) {
            const double grad =
                (state.concentrations(f + 1, i) - state.concentrations(f, i)) * inv_dx;
            worst = std::max(worst, fluxes.j(f + 1, i) * grad);
        }
    }
    return worst;
}

} // namespace

Trajectory simulate(const Scenario& scenario) {
    if (scenario.t_end < 0.0) raise(ErrorCode::Config, "t_end must be nonnegative");

    Trajectory trajectory;
    trajectory.grid = scenario.grid;
    trajectory.d = scenario.d;

    MixtureState state = initial_state(scenario);
    const double dt = stable_dt(scenario.grid, scenario.d, scenario.cfl);
    const long steps =
        scenario.t_end == 0.0 ? 0 : static_cast<long>(std::ceil(scenario.t_end / dt - 1e-9));
    const long stride = scenario.output_stride > 0
                            ? scenario.output_stride
                            : std::max<long>(1, steps / kAutoSnapshotTarget);

    double cumulative = 0.0;
    double h0 = 0.0;
    double previous_rate = 0.0;
    double pending_repair = 0.0; // repair of the step that produced the current state
    for (long k = 0; k <= steps; ++k) {
        const bool last = (k == steps);
        const double t = last ? scenario.t_end : k * dt;
        state.time = t;

        FluxSolution fluxes;
        double repair = 0.0;
        MixtureState next;
        if (!last) {
            const double dt_k = (k == steps - 1) ? scenario.t_end - k * dt : dt;
            try {
                StepResult sr = step(state, scenario.grid, scenario.d, dt_k,
                                     scenario.integrator, scenario.flux_truncation);
                fluxes = std::move(sr.fluxes);
                next = std::move(sr.state);
                repair = sr.repair_magnitude;
            } catch (const Error& e) {
                std::ostringstream msg;
                msg << "step " << k << " (t = " << t << "): " << e.what();
                throw Error(e.code(), msg.str());
            }
        } else {
            fluxes = flux_from_state(state, scenario.grid, scenario.d);
            truncate_fluxes(&fluxes, scenario.flux_truncation);
        }

        LedgerEntry entry = make_ledger_entry(state, fluxes, scenario.grid, scenario.d, t);
        entry.repair_magnitude = pending_repair;
        if (k == 0) {
            h0 = entry.entropy;
        } else {
            const double dt_prev = t - trajectory.ledger.back().t;
            cumulative += 0.5 * dt_prev * (previous_rate + entry.dissipation_rate);
        }
        entry.cumulative_dissipation = cumulative;
        entry.residual = entry.entropy + cumulative - h0;
        previous_rate = entry.dissipation_rate;

        trajectory.max_uphill_product =
            std::max(trajectory.max_uphill_product, max_uphill(state, fluxes, scenario.grid));

        if (last || k % stride == 0)
            trajectory.snapshots.push_back(Snapshot{t, state, fluxes});

        trajectory.ledger.push_back(std::move(entry));
        if (!last) {
            state = std::move(next);
            pending_repair = repair;
            trajectory.max_repair = std::max(trajectory.max_repair, repair);
        }
    }
    return trajectory;
}

} // namespace msdiff
