// msdiff command-line front end. Talks to the library exclusively through
// the C API in msdiff/msdiff.h.

#include <msdiff/msdiff.h>

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <string>
#include <vector>

namespace {

int exit_code_for(msd_status status) {
    switch (status) {
        case MSD_OK: return 0;
        case MSD_ERR_STABILITY: return 2;
        default: return 1;
    }
}

int fail(msd_status status) {
    std::fprintf(stderr, "error (%s): %s\n", msd_status_name(status), msd_last_error());
    return exit_code_for(status);
}

struct ScenarioHandle {
    msd_scenario* ptr = nullptr;
    ~ScenarioHandle() { msd_scenario_free(ptr); }
};

struct RunHandle {
    msd_run* ptr = nullptr;
    ~RunHandle() { msd_run_free(ptr); }
};

struct RefineHandle {
    msd_refine* ptr = nullptr;
    ~RefineHandle() { msd_refine_free(ptr); }
};

unsigned emit_mask_from(const std::vector<std::string>& emit) {
    if (emit.empty()) return MSD_EMIT_ENTROPY_SERIES | MSD_EMIT_SNAPSHOTS;
    unsigned mask = 0;
    for (const std::string& item : emit) {
        if (item == "entropy_series") mask |= MSD_EMIT_ENTROPY_SERIES;
        else if (item == "state_snapshots") mask |= MSD_EMIT_SNAPSHOTS;
        else if (item == "audit_report") mask |= MSD_EMIT_AUDIT_REPORT;
        else if (item == "all") mask |= MSD_EMIT_ALL;
        else throw CLI::ValidationError("--emit", "unknown artifact '" + item + "'");
    }
    return mask;
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            const std::vector<std::string>& emit, double truncate) {
    ScenarioHandle scenario;
    msd_status status = msd_scenario_load_file(scenario_path.c_str(), &scenario.ptr);
    if (status != MSD_OK) return fail(status);
    if (truncate > 0.0) {
        status = msd_scenario_set_flux_truncation(scenario.ptr, truncate);
        if (status != MSD_OK) return fail(status);
    }

    RunHandle run;
    status = msd_simulate(scenario.ptr, &run.ptr);
    if (status != MSD_OK) return fail(status);

    status = msd_run_write_outputs(run.ptr, out_dir.c_str(), emit_mask_from(emit));
    if (status != MSD_OK) return fail(status);

    const size_t rows = msd_run_ledger_size(run.ptr);
    msd_ledger_row last{};
    msd_run_ledger_row(run.ptr, rows - 1, &last);
    std::printf("run complete: %zu ledger rows, %zu snapshots -> %s\n", rows,
                msd_run_snapshot_count(run.ptr), out_dir.c_str());
    std::printf("  H(0) = %.17g, H(T) = %.17g\n", msd_run_initial_entropy(run.ptr), last.entropy);
    std::printf("  sup |residual| = %.17g\n", msd_run_sup_residual(run.ptr));
    std::printf("  max mass drift = %.3g, max simplex deviation = %.3g\n",
                msd_run_max_mass_drift(run.ptr), msd_run_max_simplex_deviation(run.ptr));
    std::printf("  uphill diffusion observed: %s\n",
                msd_run_uphill_detected(run.ptr) ? "yes" : "no");
    return 0;
}

int cmd_refine(const std::string& scenario_path, int levels, const std::string& out_path,
               double truncate) {
    ScenarioHandle scenario;
    msd_status status = msd_scenario_load_file(scenario_path.c_str(), &scenario.ptr);
    if (status != MSD_OK) return fail(status);
    if (truncate > 0.0) {
        status = msd_scenario_set_flux_truncation(scenario.ptr, truncate);
        if (status != MSD_OK) return fail(status);
    }

    RefineHandle refine;
    status = msd_refine_run(scenario.ptr, levels, &refine.ptr);
    if (status != MSD_OK) return fail(status);

    std::printf("%8s %12s %12s %8s %12s %8s %12s %8s\n", "cells", "sup|r|", "order", "L2",
                "order", "weak", "order", "drift");
    for (int l = 0; l < msd_refine_levels(refine.ptr); ++l) {
        msd_refine_row row{};
        msd_refine_row_get(refine.ptr, l, &row);
        std::printf("%8d %12.4e %12.2f %8.2e %12.2f %8.2e %12.2f %8.1e\n", row.cells,
                    row.sup_residual, row.residual_order, row.l2_error, row.l2_order,
                    row.max_weak_residual, row.weak_order, row.mass_drift);
    }
    if (!out_path.empty()) {
        status = msd_refine_write_csv(refine.ptr, out_path.c_str());
        if (status != MSD_OK) return fail(status);
        std::printf("table written to %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_audit(const std::string& run_dir) {
    char* json = nullptr;
    const msd_status status = msd_audit_directory(run_dir.c_str(), &json);
    if (status != MSD_OK) return fail(status);
    std::printf("%s", json);
    msd_string_free(json);
    std::printf("report written to %s/audit_report.json\n", run_dir.c_str());
    return 0;
}

int cmd_fuzz(uint64_t seed, int cases) {
    msd_fuzz_report report{};
    const msd_status status = msd_fuzz(seed, cases, &report);
    if (status != MSD_OK) return fail(status);
    std::printf("fuzz: %d cases, seed %" PRIu64 "\n", report.cases, report.seed);
    std::printf("  max kernel residual     = %.3e\n", report.max_kernel_residual);
    std::printf("  min quadratic form      = %.3e\n", report.min_quadratic_form);
    std::printf("  max identity error      = %.3e\n", report.max_identity_error);
    std::printf("  max oracle mismatch     = %.3e\n", report.max_oracle_mismatch);
    std::printf("  max scaling error       = %.3e\n", report.max_scaling_error);
    if (report.failures > 0) {
        std::fprintf(stderr, "%d property violations (first: %s)\n", report.failures,
                     msd_last_error());
        return 1;
    }
    std::printf("  all properties hold\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"msdiff: Maxwell-Stefan multicomponent diffusion simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(msd_version()));

    std::string scenario_path, out_dir = "out", out_csv, run_dir;
    std::vector<std::string> emit;
    double truncate = 0.0;
    int levels = 3, cases = 1000;
    uint64_t seed = 1;

    auto* run = app.add_subcommand("run", "simulate a scenario and write its artifacts");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--out", out_dir, "output directory (default: out)");
    run->add_option("--emit", emit,
                    "artifacts: entropy_series, state_snapshots, audit_report, all");
    run->add_option("--truncate-fluxes", truncate,
                    "fault injection: scale fluxes by (1 - f)");

    auto* refine = app.add_subcommand("refine", "convergence study over doubled grids");
    refine->add_option("scenario", scenario_path, "scenario file")->required();
    refine->add_option("--levels", levels, "number of refinement levels (default: 3)");
    refine->add_option("--out", out_csv, "write the table as CSV");
    refine->add_option("--truncate-fluxes", truncate,
                       "fault injection: scale fluxes by (1 - f)");

    auto* audit = app.add_subcommand("audit", "audit a run directory against the weak form");
    audit->add_option("run_dir", run_dir, "directory written by 'run'")->required();

    auto* fuzz = app.add_subcommand("fuzz", "friction-solver property suite");
    fuzz->add_option("--seed", seed, "RNG seed (default: 1)");
    fuzz->add_option("--cases", cases, "number of cases (default: 1000)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(scenario_path, out_dir, emit, truncate);
    if (refine->parsed()) return cmd_refine(scenario_path, levels, out_csv, truncate);
    if (audit->parsed()) return cmd_audit(run_dir);
    if (fuzz->parsed()) return cmd_fuzz(seed, cases);
    return 1;
}
