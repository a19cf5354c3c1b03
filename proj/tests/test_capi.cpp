// Exercises the shared-library surface through the public C header only.
#include <msdiff/msdiff.h>

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

const char* kBinaryScenario =
    "grid.cells = 24\n"
    "grid.length = 1.0\n"
    "species = 2\n"
    "d.1.2 = 1.0\n"
    "initial.preset = cosine_perturbation\n"
    "initial.amplitudes = 0.3, -0.3\n"
    "t_end = 0.01\n"
    "output_stride = 8\n";

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

} // namespace

TEST_CASE("version and status names") {
    CHECK(std::strlen(msd_version()) > 0);
    CHECK(std::string(msd_status_name(MSD_OK)) == "ok");
    CHECK(std::string(msd_status_name(MSD_ERR_STABILITY)) == "stability failure");
}

TEST_CASE("null arguments are rejected, not crashed on") {
    CHECK(msd_scenario_parse(nullptr, nullptr) == MSD_ERR_ARGUMENT);
    CHECK(msd_simulate(nullptr, nullptr) == MSD_ERR_ARGUMENT);
    CHECK(msd_fuzz(1, 10, nullptr) == MSD_ERR_ARGUMENT);
    CHECK(std::strlen(msd_last_error()) > 0);
}

TEST_CASE("parse failures report a status and message") {
    msd_scenario* scenario = nullptr;
    CHECK(msd_scenario_parse("grid.cells = nonsense\n", &scenario) == MSD_ERR_PARSE);
    CHECK(scenario == nullptr);
    CHECK(std::string(msd_last_error()).find("grid.cells") != std::string::npos);

    CHECK(msd_scenario_load_file("/does/not/exist.scn", &scenario) == MSD_ERR_IO);
}

TEST_CASE("full simulate cycle through the C API") {
    msd_scenario* scenario = nullptr;
    REQUIRE(msd_scenario_parse(kBinaryScenario, &scenario) == MSD_OK);
    CHECK(msd_scenario_species(scenario) == 2);
    CHECK(msd_scenario_cells(scenario) == 24);
    CHECK(msd_scenario_t_end(scenario) == 0.01);

    msd_run* run = nullptr;
    REQUIRE(msd_simulate(scenario, &run) == MSD_OK);
    CHECK(msd_run_species(run) == 2);
    CHECK(msd_run_cells(run) == 24);

    const size_t rows = msd_run_ledger_size(run);
    REQUIRE(rows > 2);
    msd_ledger_row first{}, last{};
    REQUIRE(msd_run_ledger_row(run, 0, &first) == MSD_OK);
    REQUIRE(msd_run_ledger_row(run, rows - 1, &last) == MSD_OK);
    CHECK(first.t == 0.0);
    CHECK(first.residual == 0.0);
    CHECK(last.t == 0.01);
    CHECK(last.entropy <= first.entropy);
    CHECK(first.mass[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(msd_run_ledger_row(run, rows, &last) == MSD_ERR_ARGUMENT);

    const size_t snaps = msd_run_snapshot_count(run);
    REQUIRE(snaps >= 2);
    double t0 = -1.0;
    REQUIRE(msd_run_snapshot_time(run, 0, &t0) == MSD_OK);
    CHECK(t0 == 0.0);
    std::vector<double> state(24 * 2);
    REQUIRE(msd_run_snapshot_state(run, 0, state.data(), state.size()) == MSD_OK);
    CHECK(state[0] + state[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(msd_run_snapshot_state(run, 0, state.data(), 3) == MSD_ERR_ARGUMENT);

    CHECK(msd_run_sup_residual(run) < 1e-4);
    CHECK(msd_run_max_mass_drift(run) < 1e-12);
    CHECK(msd_run_max_simplex_deviation(run) < 1e-12);
    CHECK(msd_run_uphill_detected(run) == 0);

    char* json = nullptr;
    REQUIRE(msd_run_audit_json(run, &json) == MSD_OK);
    REQUIRE(json != nullptr);
    CHECK(std::string(json).find("\"bounds_ok\": true") != std::string::npos);
    msd_string_free(json);

    msd_run_free(run);
    msd_scenario_free(scenario);
}

TEST_CASE("outputs, directory audit and determinism through the C API") {
    const std::string dir_a = "msdiff_capi_out_a";
    const std::string dir_b = "msdiff_capi_out_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);

    msd_scenario* scenario = nullptr;
    REQUIRE(msd_scenario_parse(kBinaryScenario, &scenario) == MSD_OK);
    for (const std::string& dir : {dir_a, dir_b}) {
        msd_run* run = nullptr;
        REQUIRE(msd_simulate(scenario, &run) == MSD_OK);
        REQUIRE(msd_run_write_outputs(run, dir.c_str(), MSD_EMIT_ALL) == MSD_OK);
        msd_run_free(run);
    }
    CHECK(slurp(dir_a + "/entropy_series.csv") == slurp(dir_b + "/entropy_series.csv"));
    CHECK(slurp(dir_a + "/audit_report.json") == slurp(dir_b + "/audit_report.json"));
    CHECK(slurp(dir_a + "/snapshots/snapshot_000000.csv") ==
          slurp(dir_b + "/snapshots/snapshot_000000.csv"));

    char* json = nullptr;
    REQUIRE(msd_audit_directory(dir_a.c_str(), &json) == MSD_OK);
    CHECK(std::string(json).find("\"simplex_ok\": true") != std::string::npos);
    msd_string_free(json);

    msd_scenario_free(scenario);
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST_CASE("refinement study through the C API") {
    msd_scenario* scenario = nullptr;
    REQUIRE(msd_scenario_parse(kBinaryScenario, &scenario) == MSD_OK);

    msd_refine* refine = nullptr;
    REQUIRE(msd_refine_run(scenario, 2, &refine) == MSD_OK);
    CHECK(msd_refine_levels(refine) == 2);
    msd_refine_row coarse{}, fine{};
    REQUIRE(msd_refine_row_get(refine, 0, &coarse) == MSD_OK);
    REQUIRE(msd_refine_row_get(refine, 1, &fine) == MSD_OK);
    CHECK(coarse.cells == 24);
    CHECK(fine.cells == 48);
    CHECK(std::isnan(coarse.residual_order));
    CHECK(fine.sup_residual < coarse.sup_residual);
    CHECK(msd_refine_row_get(refine, 2, &fine) == MSD_ERR_ARGUMENT);

    const std::string csv_path = "msdiff_capi_refine.csv";
    REQUIRE(msd_refine_write_csv(refine, csv_path.c_str()) == MSD_OK);
    CHECK(slurp(csv_path).find("cells,") == 0);
    std::filesystem::remove(csv_path);

    msd_refine_free(refine);
    msd_scenario_free(scenario);
}

TEST_CASE("flux truncation and stability failures surface as statuses") {
    // truncation setter validates its range
    msd_scenario* scenario = nullptr;
    REQUIRE(msd_scenario_parse(kBinaryScenario, &scenario) == MSD_OK);
    CHECK(msd_scenario_set_flux_truncation(scenario, 1.5) == MSD_ERR_CONFIG);
    CHECK(msd_scenario_set_flux_truncation(scenario, 0.01) == MSD_OK);
    msd_run* run = nullptr;
    REQUIRE(msd_simulate(scenario, &run) == MSD_OK);
    CHECK(msd_run_sup_residual(run) > 1e-6); // lossy scheme leaves a residual floor
    msd_run_free(run);
    msd_scenario_free(scenario);

    // a sawtooth at cfl = 1 blows up and maps to MSD_ERR_STABILITY
    const std::string table_path = "msdiff_capi_sawtooth.csv";
    {
        std::ofstream table(table_path);
        for (int k = 0; k < 16; ++k)
            table << ((k % 2) ? "0.7, 0.3\n" : "0.3, 0.7\n");
    }
    const std::string text =
        "grid.cells = 16\ngrid.length = 1.0\nspecies = 2\nd.1.2 = 1.0\n"
        "initial.preset = custom\ninitial.table_file = " + table_path + "\n"
        "t_end = 0.5\ncfl = 1.0\n";
    msd_scenario* stiff = nullptr;
    REQUIRE(msd_scenario_parse(text.c_str(), &stiff) == MSD_OK);
    msd_run* failed = nullptr;
    CHECK(msd_simulate(stiff, &failed) == MSD_ERR_STABILITY);
    CHECK(failed == nullptr);
    CHECK(std::string(msd_last_error()).find("step") != std::string::npos);
    msd_scenario_free(stiff);
    std::filesystem::remove(table_path);
}

TEST_CASE("fuzz through the C API") {
    msd_fuzz_report report{};
    REQUIRE(msd_fuzz(99, 200, &report) == MSD_OK);
    CHECK(report.cases == 200);
    CHECK(report.failures == 0);
    CHECK(report.max_kernel_residual <= 1e-13);
    CHECK(report.max_oracle_mismatch <= 1e-10);
}
