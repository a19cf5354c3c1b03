#include "experiment.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

namespace msdiff {

namespace fs = std::filesystem;

RunResult run_scenario(const Scenario& scenario, std::string scenario_text) {
    RunResult result;
    result.scenario = scenario;
    result.scenario_text = std::move(scenario_text);
    result.trajectory = simulate(scenario);
    return result;
}

namespace {

std::string snapshot_filename(size_t index) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "snapshot_%06zu.csv", index);
    return buffer;
}

} // namespace

void write_run_outputs(const RunResult& result, const std::string& dir, unsigned emit) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) raise(ErrorCode::Io, "cannot create output directory '" + dir + "'");

    std::string scenario_text = result.scenario_text;
    if (scenario_text.empty()) {
        const std::string table_ref = result.scenario.initial.kind == PresetKind::Custom
                                          ? "snapshots/" + snapshot_filename(0)
                                          : "";
        scenario_text = scenario_to_text(result.scenario, table_ref);
    }
    atomic_write_file(dir + "/scenario.txt", scenario_text);

    if (emit & kEmitEntropySeries)
        atomic_write_file(dir + "/entropy_series.csv", entropy_series_csv(result.trajectory));

    if (emit & (kEmitSnapshots | kEmitAuditReport)) {
        // the audit of a directory reconstructs states from the snapshots, so
        // emitting an audit implies emitting the snapshots it refers to
        const std::string snapdir = dir + "/snapshots";
        fs::create_directories(snapdir, ec);
        if (ec) raise(ErrorCode::Io, "cannot create '" + snapdir + "'");
        std::ostringstream manifest;
        manifest << "file,t\n";
        for (size_t s = 0; s < result.trajectory.snapshots.size(); ++s) {
            const std::string name = snapshot_filename(s);
            atomic_write_file(snapdir + "/" + name,
                              snapshot_csv(result.trajectory.snapshots[s], result.scenario.grid));
            manifest << name << ',' << format_g17(result.trajectory.snapshots[s].time) << "\n";
        }
        atomic_write_file(snapdir + "/manifest.csv", manifest.str());
    }

    if (emit & kEmitAuditReport)
        atomic_write_file(dir + "/audit_report.json",
                          audit_report_json(audit_definition(result.trajectory)));
}

namespace {

std::vector<std::string> split_csv_row(const std::string& row) {
    std::vector<std::string> fields;
    std::stringstream stream(row);
    std::string item;
    while (std::getline(stream, item, ',')) fields.push_back(item);
    return fields;
}

MixtureState load_snapshot_csv(const std::string& path, const Grid1D& grid, int n, double time) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::Io, "cannot open snapshot '" + path + "'");
    std::string row;
    std::getline(in, row); // header
    Matrix c(grid.num_cells, n);
    int k = 0;
    while (std::getline(in, row)) {
        if (row.empty()) continue;
        const auto fields = split_csv_row(row);
        if (static_cast<int>(fields.size()) != n + 1)
            raise(ErrorCode::Io, "snapshot '" + path + "' row has wrong field count");
        if (k >= grid.num_cells) raise(ErrorCode::Io, "snapshot '" + path + "' has extra rows");
        for (int i = 0; i < n; ++i) c(k, i) = std::stod(fields[i + 1]);
        ++k;
    }
    if (k != grid.num_cells) raise(ErrorCode::Io, "snapshot '" + path + "' has missing rows");
    return MixtureState{std::move(c), time};
}

void load_ledger_csv(const std::string& path, Trajectory* trajectory, int n) {
    std::ifstream in(path);
    if (!in) return; // ledger is optional for a directory audit
    std::string row;
    std::getline(in, row);
    while (std::getline(in, row)) {
        if (row.empty()) continue;
        const auto fields = split_csv_row(row);
        if (static_cast<int>(fields.size()) != 8 + n) continue;
        LedgerEntry entry;
        entry.t = std::stod(fields[0]);
        entry.entropy = std::stod(fields[1]);
        entry.dissipation_rate = std::stod(fields[2]);
        entry.cumulative_dissipation = std::stod(fields[3]);
        entry.residual = std::stod(fields[4]);
        entry.pairing_gap = std::stod(fields[5]);
        entry.min_concentration = std::stod(fields[6]);
        entry.repair_magnitude = std::stod(fields[7]);
        entry.masses = Vector(n);
        for (int i = 0; i < n; ++i) entry.masses(i) = std::stod(fields[8 + i]);
        trajectory->ledger.push_back(std::move(entry));
    }
}

} // namespace

Trajectory load_trajectory(const std::string& dir) {
    const Scenario scenario = load_scenario_file(dir + "/scenario.txt");

    Trajectory trajectory;
    trajectory.grid = scenario.grid;
    trajectory.d = scenario.d;

    const std::string manifest_path = dir + "/snapshots/manifest.csv";
    std::ifstream manifest(manifest_path);
    if (!manifest) raise(ErrorCode::Io, "missing '" + manifest_path + "'");
    std::string row;
    std::getline(manifest, row);
    while (std::getline(manifest, row)) {
        if (row.empty()) continue;
        const auto fields = split_csv_row(row);
        if (fields.size() != 2) raise(ErrorCode::Io, "malformed manifest row '" + row + "'");
        const double time = std::stod(fields[1]);
        MixtureState state = load_snapshot_csv(dir + "/snapshots/" + fields[0], scenario.grid,
                                               scenario.n_species, time);
        // fluxes are a pure function of the state; recompute rather than store
        FluxSolution fluxes = flux_from_state(state, scenario.grid, scenario.d);
        trajectory.snapshots.push_back(Snapshot{time, std::move(state), std::move(fluxes)});
    }
    if (trajectory.snapshots.empty()) raise(ErrorCode::Io, "run directory holds no snapshots");

    load_ledger_csv(dir + "/entropy_series.csv", &trajectory, scenario.n_species);
    return trajectory;
}

AuditReport audit_directory(const std::string& dir) {
    const Trajectory trajectory = load_trajectory(dir);
    AuditReport report = audit_definition(trajectory);
    atomic_write_file(dir + "/audit_report.json", audit_report_json(report));
    return report;
}

std::optional<double> binary_benchmark_l2_error(const Scenario& scenario,
                                                const Trajectory& trajectory) {
    if (scenario.initial.kind != PresetKind::CosinePerturbation || scenario.n_species != 2)
        return std::nullopt;
    if (trajectory.snapshots.empty()) return std::nullopt;
    const Snapshot& final = trajectory.snapshots.back();
    const Grid1D& grid = scenario.grid;
    const double diffusivity = scenario.d(0, 1);
    const double L = grid.domain_length;
    const double decay =
        std::exp(-M_PI * M_PI * diffusivity * final.time / (L * L));
    double accum = 0.0;
    for (int k = 0; k < grid.num_cells; ++k) {
        const double mode = std::cos(M_PI * grid.cell_center(k) / L) * decay;
        for (int i = 0; i < 2; ++i) {
            const double exact = 0.5 + scenario.initial.amplitudes[i] * mode;
            const double diff = final.state.concentrations(k, i) - exact;
            accum += diff * diff;
        }
    }
    return std::sqrt(accum * grid.dx);
}

double max_mass_drift(const Trajectory& trajectory) {
    if (trajectory.ledger.empty()) return 0.0;
    const Vector& initial = trajectory.ledger.front().masses;
    double drift = 0.0;
    for (const LedgerEntry& entry : trajectory.ledger)
        for (int i = 0; i < initial.size(); ++i)
            drift = std::max(drift, std::abs(entry.masses(i) - initial(i)) /
                                        std::max(std::abs(initial(i)), 1e-300));
    return drift;
}

double max_simplex_deviation(const Trajectory& trajectory) {
    double worst = 0.0;
    for (const Snapshot& snap : trajectory.snapshots)
        worst = std::max(worst, validate_state(snap.state).max_sum_deviation);
    return worst;
}

namespace {

Scenario refined_scenario(const Scenario& base, int factor, int base_stride) {
    if (base.initial.kind == PresetKind::Custom)
        raise(ErrorCode::Config, "custom initial tables cannot be re-gridded for refinement");
    Scenario level = base;
    level.grid = Grid1D(base.grid.num_cells * factor, base.grid.domain_length);
    // steps grow like factor^2; doubling the stride per halving keeps the
    // snapshot spacing proportional to dx
    level.output_stride = base_stride * factor;
    return level;
}

RefineLevel measure_level(const Scenario& scenario) {
    RefineLevel level;
    level.cells = scenario.grid.num_cells;
    level.dx = scenario.grid.dx;
    level.dt = stable_dt(scenario.grid, scenario.d, scenario.cfl);

    const Trajectory trajectory = simulate(scenario);
    level.sup_residual = trajectory.sup_abs_residual();
    const auto l2 = binary_benchmark_l2_error(scenario, trajectory);
    level.l2_error = l2 ? *l2 : std::numeric_limits<double>::quiet_NaN();
    level.mass_drift = max_mass_drift(trajectory);
    level.max_simplex_deviation = max_simplex_deviation(trajectory);

    const AuditReport audit = audit_definition(trajectory);
    level.max_weak_residual = audit.max_weak_residual;
    level.max_renorm_residual = audit.max_renorm_residual;
    return level;
}

double observed_order(double coarse, double fine) {
    if (!(coarse > 0.0) || !(fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log2(coarse / fine);
}

} // namespace

RefineTable refine_study(const Scenario& scenario, int levels) {
    if (levels < 1) raise(ErrorCode::Config, "refinement needs at least one level");

    const long base_steps =
        scenario.t_end > 0.0
            ? static_cast<long>(std::ceil(
                  scenario.t_end / stable_dt(scenario.grid, scenario.d, scenario.cfl) - 1e-9))
            : 0;
    const int base_stride = scenario.output_stride > 0
                                ? scenario.output_stride
                                : static_cast<int>(std::max<long>(1, base_steps / 128));

    std::vector<std::future<RefineLevel>> futures;
    for (int l = 0; l < levels; ++l) {
        const Scenario level = refined_scenario(scenario, 1 << l, base_stride);
        futures.push_back(std::async(std::launch::async, measure_level, level));
    }

    RefineTable table;
    for (auto& future : futures) table.levels.push_back(future.get());
    for (size_t l = 1; l < table.levels.size(); ++l) {
        table.levels[l].residual_order =
            observed_order(table.levels[l - 1].sup_residual, table.levels[l].sup_residual);
        table.levels[l].l2_order =
            observed_order(table.levels[l - 1].l2_error, table.levels[l].l2_error);
        table.levels[l].weak_order = observed_order(table.levels[l - 1].max_weak_residual,
                                                    table.levels[l].max_weak_residual);
    }
    if (!table.levels.empty()) {
        table.levels[0].residual_order = std::numeric_limits<double>::quiet_NaN();
        table.levels[0].l2_order = std::numeric_limits<double>::quiet_NaN();
        table.levels[0].weak_order = std::numeric_limits<double>::quiet_NaN();
    }
    return table;
}

std::string RefineTable::csv() const {
    std::ostringstream out;
    out << "cells,dx,dt,sup_residual,residual_order,l2_error,l2_order,max_weak_residual,"
           "weak_order,max_renorm_residual,mass_drift,max_simplex_deviation\n";
    for (const RefineLevel& level : levels) {
        out << level.cells << ',' << format_g17(level.dx) << ',' << format_g17(level.dt) << ','
            << format_g17(level.sup_residual) << ',' << format_g17(level.residual_order) << ','
            << format_g17(level.l2_error) << ',' << format_g17(level.l2_order) << ','
            << format_g17(level.max_weak_residual) << ',' << format_g17(level.weak_order) << ','
            << format_g17(level.max_renorm_residual) << ',' << format_g17(level.mass_drift) << ','
            << format_g17(level.max_simplex_deviation) << "\n";
    }
    return out.str();
}

namespace {

class FuzzRng {
public:
    explicit FuzzRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        // 53-bit mantissa; avoids distribution-implementation differences
        return (engine_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    double normal() {
        const double u = std::max(uniform(), 1e-300);
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
    }
    int integer(int lo, int hi) { // inclusive
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
};

Eigen::VectorXd random_simplex_point(FuzzRng& rng, int n, double min_c) {
    Eigen::VectorXd c(n);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            c(i) = -std::log(std::max(rng.uniform(), 1e-300)); // Dirichlet(1)
            sum += c(i);
        }
        c /= sum;
        if (c.minCoeff() >= min_c) return c;
    }
    c.setConstant(1.0 / n);
    return c;
}

BinaryDiffusivities random_diffusivities(FuzzRng& rng, int n) {
    Matrix d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            d(i, j) = rng.log_uniform(0.1, 10.0);
            d(j, i) = d(i, j);
        }
    }
    return BinaryDiffusivities(std::move(d));
}

} // namespace

FuzzReport fuzz_friction(std::uint64_t seed, int cases) {
    FuzzReport report;
    report.seed = seed;
    report.cases = cases;
    FuzzRng rng(seed);

    auto record_failure = [&report](const std::string& what) {
        ++report.failures;
        if (report.messages.size() < 10) report.messages.push_back(what);
    };

    for (int t = 0; t < cases; ++t) {
        const int n = rng.integer(2, 8);
        const Eigen::VectorXd c = random_simplex_point(rng, n, 1e-3);
        const BinaryDiffusivities d = random_diffusivities(rng, n);
        const FrictionMatrix A = assemble_friction_matrix(c, d);

        const double kernel_residual =
            (A.a * A.kernel_vector).norm() / std::max(1.0, A.a.norm());
        report.max_kernel_residual = std::max(report.max_kernel_residual, kernel_residual);
        if (kernel_residual > 1e-13)
            record_failure("case " + std::to_string(t) + ": kernel residual " +
                           format_g17(kernel_residual));

        Eigen::VectorXd m(n);
        for (int i = 0; i < n; ++i) m(i) = rng.normal();
        const double quad = m.dot(A.a * m);
        report.min_quadratic_form = std::min(report.min_quadratic_form, quad);
        if (quad < -1e-13)
            record_failure("case " + std::to_string(t) + ": m^T A m = " + format_g17(quad));

        const double pair_sum = dissipation_density(c, m, d);
        // normalized like the kernel check: the natural scale of the two
        // routes is |A| |m|^2, which keeps the comparison meaningful when the
        // form itself nearly vanishes (m close to the kernel)
        const double identity_scale = std::max(1.0, A.a.norm() * m.squaredNorm());
        const double identity_error = std::abs(quad - pair_sum) / identity_scale;
        report.max_identity_error = std::max(report.max_identity_error, identity_error);
        if (identity_error > 1e-12)
            record_failure("case " + std::to_string(t) + ": quadratic-form identity error " +
                           format_g17(identity_error));

        // oracle equivalence on a RHS constrained to s-perp
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i) b(i) = rng.normal();
        const Eigen::VectorXd shat = A.kernel_vector / A.kernel_vector.norm();
        b -= shat.dot(b) * shat;
        FrictionSolver solver(n);
        const BottDuffinResult bd = solver.bott_duffin(A, b);
        const Eigen::VectorXd mp = solver.moore_penrose(A, b);
        const double mismatch = (bd.m - mp).norm() / std::max(mp.norm(), 1e-30);
        report.max_oracle_mismatch = std::max(report.max_oracle_mismatch, mismatch);
        if (mismatch > 1e-10)
            record_failure("case " + std::to_string(t) + ": Bott-Duffin vs Moore-Penrose " +
                           format_g17(mismatch));

        // scaling covariance: D -> lambda D scales m by lambda
        const double lambda = rng.log_uniform(0.25, 4.0);
        Matrix scaled = d.d * lambda;
        const FrictionMatrix A_scaled =
            assemble_friction_matrix(c, BinaryDiffusivities(std::move(scaled)));
        const BottDuffinResult bd_scaled = solver.bott_duffin(A_scaled, b);
        const double scaling_error = (bd_scaled.m - lambda * bd.m).norm() /
                                     std::max(lambda * bd.m.norm(), 1e-30);
        report.max_scaling_error = std::max(report.max_scaling_error, scaling_error);
        if (scaling_error > 1e-10)
            record_failure("case " + std::to_string(t) + ": scaling covariance error " +
                           format_g17(scaling_error));
    }
    return report;
}

} // namespace msdiff
