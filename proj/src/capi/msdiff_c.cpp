#include "msdiff/msdiff.h"

#include "experiment.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

using namespace msdiff;

struct msd_scenario {
    Scenario scenario;
    std::string text; // verbatim source when loaded from a file
};

struct msd_run {
    RunResult result;
};

struct msd_refine {
    RefineTable table;
};

namespace {

thread_local std::string g_last_error;

msd_status status_from(const Error& e) {
    switch (e.code()) {
        case ErrorCode::Parse: return MSD_ERR_PARSE;
        case ErrorCode::Config: return MSD_ERR_CONFIG;
        case ErrorCode::Stability: return MSD_ERR_STABILITY;
        case ErrorCode::Solver:
        case ErrorCode::DegenerateCell: return MSD_ERR_SOLVER;
        case ErrorCode::Io: return MSD_ERR_IO;
        case ErrorCode::Structural:
        case ErrorCode::Resolution: return MSD_ERR_ARGUMENT;
    }
    return MSD_ERR_INTERNAL;
}

template <typename Fn>
msd_status guarded(Fn&& fn) {
    try {
        fn();
        return MSD_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_from(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MSD_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return MSD_ERR_INTERNAL;
    }
}

msd_status argument_error(const char* message) {
    g_last_error = message;
    return MSD_ERR_ARGUMENT;
}

char* duplicate(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (out) std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* msd_version(void) { return "0.1.0"; }

const char* msd_status_name(msd_status status) {
    switch (status) {
        case MSD_OK: return "ok";
        case MSD_ERR_PARSE: return "parse error";
        case MSD_ERR_CONFIG: return "configuration error";
        case MSD_ERR_STABILITY: return "stability failure";
        case MSD_ERR_SOLVER: return "solver failure";
        case MSD_ERR_IO: return "io error";
        case MSD_ERR_ARGUMENT: return "invalid argument";
        case MSD_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* msd_last_error(void) { return g_last_error.c_str(); }

void msd_string_free(char* text) { std::free(text); }

msd_status msd_scenario_parse(const char* text, msd_scenario** out) {
    if (!text || !out) return argument_error("null argument to msd_scenario_parse");
    *out = nullptr;
    return guarded([&] {
        auto handle = std::make_unique<msd_scenario>();
        handle->scenario = parse_scenario(text);
        handle->text = text;
        *out = handle.release();
    });
}

msd_status msd_scenario_load_file(const char* path, msd_scenario** out) {
    if (!path || !out) return argument_error("null argument to msd_scenario_load_file");
    *out = nullptr;
    return guarded([&] {
        auto handle = std::make_unique<msd_scenario>();
        handle->scenario = load_scenario_file(path);
        handle->text = read_text_file(path);
        *out = handle.release();
    });
}

void msd_scenario_free(msd_scenario* scenario) { delete scenario; }

int msd_scenario_species(const msd_scenario* s) { return s ? s->scenario.n_species : 0; }
int msd_scenario_cells(const msd_scenario* s) { return s ? s->scenario.grid.num_cells : 0; }
double msd_scenario_t_end(const msd_scenario* s) { return s ? s->scenario.t_end : 0.0; }

msd_status msd_scenario_set_flux_truncation(msd_scenario* scenario, double fraction) {
    if (!scenario) return argument_error("null scenario");
    if (!(fraction >= 0.0 && fraction < 1.0)) {
        g_last_error = "flux truncation must lie in [0, 1)";
        return MSD_ERR_CONFIG;
    }
    scenario->scenario.flux_truncation = fraction;
    // the stored text no longer matches the scenario; regenerate on demand
    scenario->text.clear();
    return MSD_OK;
}

msd_status msd_simulate(const msd_scenario* scenario, msd_run** out) {
    if (!scenario || !out) return argument_error("null argument to msd_simulate");
    *out = nullptr;
    return guarded([&] {
        auto handle = std::make_unique<msd_run>();
        handle->result = run_scenario(scenario->scenario, scenario->text);
        *out = handle.release();
    });
}

void msd_run_free(msd_run* run) { delete run; }

int msd_run_species(const msd_run* run) { return run ? run->result.scenario.n_species : 0; }
int msd_run_cells(const msd_run* run) { return run ? run->result.scenario.grid.num_cells : 0; }

size_t msd_run_ledger_size(const msd_run* run) {
    return run ? run->result.trajectory.ledger.size() : 0;
}

msd_status msd_run_ledger_row(const msd_run* run, size_t index, msd_ledger_row* out) {
    if (!run || !out) return argument_error("null argument to msd_run_ledger_row");
    const auto& ledger = run->result.trajectory.ledger;
    if (index >= ledger.size()) return argument_error("ledger index out of range");
    const LedgerEntry& entry = ledger[index];
    out->t = entry.t;
    out->entropy = entry.entropy;
    out->dissipation_rate = entry.dissipation_rate;
    out->cumulative_dissipation = entry.cumulative_dissipation;
    out->residual = entry.residual;
    out->pairing_gap = entry.pairing_gap;
    out->min_concentration = entry.min_concentration;
    out->repair_magnitude = entry.repair_magnitude;
    for (int i = 0; i < MSD_MAX_SPECIES; ++i)
        out->mass[i] = i < entry.masses.size() ? entry.masses(i) : 0.0;
    return MSD_OK;
}

size_t msd_run_snapshot_count(const msd_run* run) {
    return run ? run->result.trajectory.snapshots.size() : 0;
}

msd_status msd_run_snapshot_time(const msd_run* run, size_t index, double* out) {
    if (!run || !out) return argument_error("null argument to msd_run_snapshot_time");
    const auto& snapshots = run->result.trajectory.snapshots;
    if (index >= snapshots.size()) return argument_error("snapshot index out of range");
    *out = snapshots[index].time;
    return MSD_OK;
}

msd_status msd_run_snapshot_state(const msd_run* run, size_t index, double* buffer,
                                  size_t capacity) {
    if (!run || !buffer) return argument_error("null argument to msd_run_snapshot_state");
    const auto& snapshots = run->result.trajectory.snapshots;
    if (index >= snapshots.size()) return argument_error("snapshot index out of range");
    const Matrix& c = snapshots[index].state.concentrations;
    const size_t needed = static_cast<size_t>(c.rows()) * static_cast<size_t>(c.cols());
    if (capacity < needed) return argument_error("snapshot buffer too small");
    for (int k = 0; k < c.rows(); ++k)
        for (int i = 0; i < c.cols(); ++i) buffer[k * c.cols() + i] = c(k, i);
    return MSD_OK;
}

double msd_run_sup_residual(const msd_run* run) {
    return run ? run->result.trajectory.sup_abs_residual() : 0.0;
}

double msd_run_initial_entropy(const msd_run* run) {
    return run ? run->result.trajectory.initial_entropy() : 0.0;
}

double msd_run_max_mass_drift(const msd_run* run) {
    return run ? max_mass_drift(run->result.trajectory) : 0.0;
}

double msd_run_max_simplex_deviation(const msd_run* run) {
    return run ? max_simplex_deviation(run->result.trajectory) : 0.0;
}

int msd_run_uphill_detected(const msd_run* run) {
    return run && run->result.trajectory.uphill_detected() ? 1 : 0;
}

msd_status msd_run_audit_json(const msd_run* run, char** out) {
    if (!run || !out) return argument_error("null argument to msd_run_audit_json");
    *out = nullptr;
    return guarded([&] {
        const std::string json = audit_report_json(audit_definition(run->result.trajectory));
        *out = duplicate(json);
        if (!*out) raise(ErrorCode::Io, "out of memory");
    });
}

msd_status msd_run_write_outputs(const msd_run* run, const char* directory, unsigned emit_mask) {
    if (!run || !directory) return argument_error("null argument to msd_run_write_outputs");
    return guarded([&] { write_run_outputs(run->result, directory, emit_mask); });
}

msd_status msd_audit_directory(const char* directory, char** out_json) {
    if (!directory) return argument_error("null directory");
    if (out_json) *out_json = nullptr;
    return guarded([&] {
        const AuditReport report = audit_directory(directory);
        if (out_json) {
            *out_json = duplicate(audit_report_json(report));
            if (!*out_json) raise(ErrorCode::Io, "out of memory");
        }
    });
}

msd_status msd_refine_run(const msd_scenario* scenario, int levels, msd_refine** out) {
    if (!scenario || !out) return argument_error("null argument to msd_refine_run");
    *out = nullptr;
    return guarded([&] {
        auto handle = std::make_unique<msd_refine>();
        handle->table = refine_study(scenario->scenario, levels);
        *out = handle.release();
    });
}

void msd_refine_free(msd_refine* refine) { delete refine; }

int msd_refine_levels(const msd_refine* refine) {
    return refine ? static_cast<int>(refine->table.levels.size()) : 0;
}

msd_status msd_refine_row_get(const msd_refine* refine, int level, msd_refine_row* out) {
    if (!refine || !out) return argument_error("null argument to msd_refine_row_get");
    if (level < 0 || level >= static_cast<int>(refine->table.levels.size()))
        return argument_error("refinement level out of range");
    const RefineLevel& row = refine->table.levels[level];
    out->cells = row.cells;
    out->dx = row.dx;
    out->dt = row.dt;
    out->sup_residual = row.sup_residual;
    out->residual_order = row.residual_order;
    out->l2_error = row.l2_error;
    out->l2_order = row.l2_order;
    out->max_weak_residual = row.max_weak_residual;
    out->weak_order = row.weak_order;
    out->max_renorm_residual = row.max_renorm_residual;
    out->mass_drift = row.mass_drift;
    out->max_simplex_deviation = row.max_simplex_deviation;
    return MSD_OK;
}

msd_status msd_refine_write_csv(const msd_refine* refine, const char* path) {
    if (!refine || !path) return argument_error("null argument to msd_refine_write_csv");
    return guarded([&] { atomic_write_file(path, refine->table.csv()); });
}

msd_status msd_fuzz(uint64_t seed, int cases, msd_fuzz_report* out) {
    if (!out) return argument_error("null report");
    if (cases <= 0) return argument_error("case count must be positive");
    return guarded([&] {
        const FuzzReport report = fuzz_friction(seed, cases);
        out->seed = report.seed;
        out->cases = report.cases;
        out->failures = report.failures;
        out->max_kernel_residual = report.max_kernel_residual;
        out->min_quadratic_form = report.min_quadratic_form;
        out->max_identity_error = report.max_identity_error;
        out->max_oracle_mismatch = report.max_oracle_mismatch;
        out->max_scaling_error = report.max_scaling_error;
        if (report.failures > 0) {
            g_last_error = report.messages.empty() ? "property violations detected"
                                                   : report.messages.front();
        }
    });
}

} // extern "C"
