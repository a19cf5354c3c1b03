#pragma once

#include "io.hpp"
#include "scenario_io.hpp"

#include <cstdint>
#include <optional>

namespace msdiff {

enum EmitFlags : unsigned {
    kEmitEntropySeries = 1u << 0,
    kEmitSnapshots = 1u << 1,
    kEmitAuditReport = 1u << 2,
    kEmitAll = kEmitEntropySeries | kEmitSnapshots | kEmitAuditReport,
};

struct RunResult {
    Scenario scenario;
    std::string scenario_text; // verbatim input when loaded from a file
    Trajectory trajectory;
};

RunResult run_scenario(const Scenario& scenario, std::string scenario_text = "");

/// Write run artifacts into `dir`: scenario.txt, entropy_series.csv,
/// snapshots/snapshot_NNNNNN.csv + snapshots/manifest.csv, audit_report.json
/// (per the emit mask). All files are written atomically and byte-stable.
void write_run_outputs(const RunResult& result, const std::string& dir, unsigned emit);

/// Rebuild a trajectory from a run directory written by write_run_outputs:
/// states come from the snapshot files, fluxes are recomputed from the states
/// (they are a pure function of the state), the ledger is reloaded from
/// entropy_series.csv when present.
Trajectory load_trajectory(const std::string& dir);

/// Audit a run directory against the weak-solution checks and write
/// audit_report.json into it. Returns the report.
AuditReport audit_directory(const std::string& dir);

struct RefineLevel {
    int cells = 0;
    double dx = 0.0;
    double dt = 0.0;
    double sup_residual = 0.0;      // sup_t |H(t) + int D - H(0)|
    double l2_error = 0.0;          // vs the analytic binary benchmark (NaN if n/a)
    double max_weak_residual = 0.0;
    double max_renorm_residual = 0.0;
    double mass_drift = 0.0;        // max relative per-species drift
    double max_simplex_deviation = 0.0;
    // observed orders vs the previous level (NaN on the first)
    double residual_order = 0.0;
    double l2_order = 0.0;
    double weak_order = 0.0;
};

struct RefineTable {
    std::vector<RefineLevel> levels;
    std::string csv() const;
};

/// Run the scenario at grids N, 2N, 4N, ... (dt follows dx^2 through the
/// stability bound; the snapshot stride doubles per level so the snapshot
/// spacing shrinks like dx). Levels run concurrently.
RefineTable refine_study(const Scenario& scenario, int levels);

/// L2 distance of the final state from the analytic heat-equation solution
/// 1/n + a_i cos(pi x / L) exp(-pi^2 D t / L^2). Only meaningful for the
/// two-species cosine preset (the Fick reduction); returns nullopt otherwise.
std::optional<double> binary_benchmark_l2_error(const Scenario& scenario,
                                                const Trajectory& trajectory);

/// Max over species of |mass_i(t) - mass_i(0)| / |mass_i(0)| along the ledger.
double max_mass_drift(const Trajectory& trajectory);

double max_simplex_deviation(const Trajectory& trajectory);

struct FuzzReport {
    std::uint64_t seed = 0;
    int cases = 0;
    int failures = 0;
    double max_kernel_residual = 0.0;   // |A s| / max(1, |A|)
    double min_quadratic_form = 0.0;    // most negative m^T A m encountered
    double max_identity_error = 0.0;    // relative gap of m^T A m vs the pair sum
    double max_oracle_mismatch = 0.0;   // Bott-Duffin vs Moore-Penrose, relative
    double max_scaling_error = 0.0;     // covariance under D -> lambda D
    std::vector<std::string> messages;  // first few failure descriptions
};

/// Friction-solver property suite over random (n, c, D, m, b):
/// kernel annihilation, positive semidefiniteness, the quadratic-form
/// identity, oracle equivalence on nondegenerate inputs, scaling covariance.
FuzzReport fuzz_friction(std::uint64_t seed, int cases);

} // namespace msdiff
