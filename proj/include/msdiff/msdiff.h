/* msdiff: multicomponent Maxwell-Stefan diffusion simulation library.
 *
 * C interface over the C++ core. All entry points return an msd_status;
 * on failure a thread-local message is available via msd_last_error().
 * Objects are opaque handles released with their matching _free function.
 */
#ifndef MSDIFF_H
#define MSDIFF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MSDIFF_API __declspec(dllexport)
#else
#define MSDIFF_API __attribute__((visibility("default")))
#endif

typedef enum msd_status {
    MSD_OK = 0,
    MSD_ERR_PARSE = 1,     /* scenario text rejected */
    MSD_ERR_CONFIG = 2,    /* invalid parameter or preset */
    MSD_ERR_STABILITY = 3, /* time stepping became unstable */
    MSD_ERR_SOLVER = 4,    /* friction system unsolvable at a face */
    MSD_ERR_IO = 5,        /* file read/write failure */
    MSD_ERR_ARGUMENT = 6,  /* null handle / bad index from the caller */
    MSD_ERR_INTERNAL = 7
} msd_status;

/* Capacity of the fixed mass array in msd_ledger_row. */
#define MSD_MAX_SPECIES 16

typedef struct msd_scenario msd_scenario;
typedef struct msd_run msd_run;
typedef struct msd_refine msd_refine;

MSDIFF_API const char* msd_version(void);
MSDIFF_API const char* msd_status_name(msd_status status);
/* Message from the most recent failing call on this thread. */
MSDIFF_API const char* msd_last_error(void);
MSDIFF_API void msd_string_free(char* text);

/* ---- scenarios ---------------------------------------------------- */

MSDIFF_API msd_status msd_scenario_parse(const char* text, msd_scenario** out);
MSDIFF_API msd_status msd_scenario_load_file(const char* path, msd_scenario** out);
MSDIFF_API void msd_scenario_free(msd_scenario* scenario);

MSDIFF_API int msd_scenario_species(const msd_scenario* scenario);
MSDIFF_API int msd_scenario_cells(const msd_scenario* scenario);
MSDIFF_API double msd_scenario_t_end(const msd_scenario* scenario);
/* Fault injection for negative controls: fluxes are scaled by (1 - fraction). */
MSDIFF_API msd_status msd_scenario_set_flux_truncation(msd_scenario* scenario, double fraction);

/* ---- runs ---------------------------------------------------------- */

MSDIFF_API msd_status msd_simulate(const msd_scenario* scenario, msd_run** out);
MSDIFF_API void msd_run_free(msd_run* run);

typedef struct msd_ledger_row {
    double t;
    double entropy;
    double dissipation_rate;
    double cumulative_dissipation;
    double residual; /* H(t) + cumulative dissipation - H(0) */
    double pairing_gap;
    double min_concentration;
    double repair_magnitude;
    double mass[MSD_MAX_SPECIES];
} msd_ledger_row;

MSDIFF_API int msd_run_species(const msd_run* run);
MSDIFF_API int msd_run_cells(const msd_run* run);
MSDIFF_API size_t msd_run_ledger_size(const msd_run* run);
MSDIFF_API msd_status msd_run_ledger_row(const msd_run* run, size_t index, msd_ledger_row* out);

MSDIFF_API size_t msd_run_snapshot_count(const msd_run* run);
MSDIFF_API msd_status msd_run_snapshot_time(const msd_run* run, size_t index, double* out);
/* Row-major (cells x species); capacity must be at least cells*species. */
MSDIFF_API msd_status msd_run_snapshot_state(const msd_run* run, size_t index, double* buffer,
                                             size_t capacity);

MSDIFF_API double msd_run_sup_residual(const msd_run* run);
MSDIFF_API double msd_run_initial_entropy(const msd_run* run);
MSDIFF_API double msd_run_max_mass_drift(const msd_run* run);
MSDIFF_API double msd_run_max_simplex_deviation(const msd_run* run);
MSDIFF_API int msd_run_uphill_detected(const msd_run* run);

/* Weak-solution audit as a JSON document; free with msd_string_free. */
MSDIFF_API msd_status msd_run_audit_json(const msd_run* run, char** out);

#define MSD_EMIT_ENTROPY_SERIES 1u
#define MSD_EMIT_SNAPSHOTS 2u
#define MSD_EMIT_AUDIT_REPORT 4u
#define MSD_EMIT_ALL 7u

/* Write scenario.txt, entropy_series.csv, snapshots/ and audit_report.json
 * (per the emit mask) into the directory. Deterministic: identical runs
 * produce byte-identical files. */
MSDIFF_API msd_status msd_run_write_outputs(const msd_run* run, const char* directory,
                                            unsigned emit_mask);

/* Audit a directory previously written with MSD_EMIT_SNAPSHOTS; writes
 * audit_report.json into it and optionally returns the JSON text. */
MSDIFF_API msd_status msd_audit_directory(const char* directory, char** out_json);

/* ---- refinement studies -------------------------------------------- */

typedef struct msd_refine_row {
    int cells;
    double dx;
    double dt;
    double sup_residual;
    double residual_order; /* NaN on the coarsest level */
    double l2_error;       /* NaN when no analytic benchmark applies */
    double l2_order;
    double max_weak_residual;
    double weak_order;
    double max_renorm_residual;
    double mass_drift;
    double max_simplex_deviation;
} msd_refine_row;

MSDIFF_API msd_status msd_refine_run(const msd_scenario* scenario, int levels, msd_refine** out);
MSDIFF_API void msd_refine_free(msd_refine* refine);
MSDIFF_API int msd_refine_levels(const msd_refine* refine);
MSDIFF_API msd_status msd_refine_row_get(const msd_refine* refine, int level, msd_refine_row* out);
MSDIFF_API msd_status msd_refine_write_csv(const msd_refine* refine, const char* path);

/* ---- friction-solver property suite --------------------------------- */

typedef struct msd_fuzz_report {
    uint64_t seed;
    int cases;
    int failures;
    double max_kernel_residual;
    double min_quadratic_form;
    double max_identity_error;
    double max_oracle_mismatch;
    double max_scaling_error;
} msd_fuzz_report;

MSDIFF_API msd_status msd_fuzz(uint64_t seed, int cases, msd_fuzz_report* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MSDIFF_H */
