#include "scenario_io.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace msdiff;

namespace {

const char* kMinimalBinary =
    "grid.cells = 16\n"
    "grid.length = 1.0\n"
    "species = 2\n"
    "d.1.2 = 1.0\n"
    "initial.preset = cosine_perturbation\n"
    "initial.amplitudes = 0.3, -0.3\n"
    "t_end = 0.1\n";

std::string with_line(const std::string& base, const std::string& extra) {
    return base + extra + "\n";
}

} // namespace

TEST_CASE("minimal scenario parses with defaults") {
    const Scenario sc = parse_scenario(kMinimalBinary);
    CHECK(sc.grid.num_cells == 16);
    CHECK(sc.n_species == 2);
    CHECK(sc.d(0, 1) == 1.0);
    CHECK(sc.cfl == 0.25);
    CHECK(sc.integrator == Integrator::Euler);
    CHECK(sc.output_stride == 0);
    CHECK(sc.flux_truncation == 0.0);
    CHECK(sc.t_end == 0.1);
}

TEST_CASE("comments, blank lines and both diffusivity orders are accepted") {
    const std::string text =
        "# a comment\n"
        "grid.cells = 8\n"
        "\n"
        "grid.length = 2.0   # trailing comment\n"
        "species = 2\n"
        "d.2.1 = 0.5\n"
        "initial.preset = smoothed_step\n"
        "t_end = 0.0\n";
    const Scenario sc = parse_scenario(text);
    CHECK(sc.d(0, 1) == 0.5);
    CHECK(sc.initial.interface_width == doctest::Approx(2.0 * sc.grid.dx));
}

TEST_CASE("rejections carry the key name and line number") {
    SUBCASE("negative diffusivity names d.1.2") {
        const std::string text =
            "grid.cells = 8\ngrid.length = 1\nspecies = 2\nd.1.2 = -1\n"
            "initial.preset = smoothed_step\nt_end = 0.1\n";
        CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("d.1.2"), Error);
        CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("line 4"), Error);
    }
    SUBCASE("asymmetric pair is rejected") {
        const std::string text =
            "grid.cells = 8\ngrid.length = 1\nspecies = 2\nd.1.2 = 1\nd.2.1 = 2\n"
            "initial.preset = smoothed_step\nt_end = 0.1\n";
        CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("symmetric"), Error);
    }
    SUBCASE("missing diffusivity is named") {
        const std::string text =
            "grid.cells = 8\ngrid.length = 1\nspecies = 3\nd.1.2 = 1\nd.1.3 = 1\n"
            "initial.preset = duncan_toor\nt_end = 0.1\n";
        CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("d.2.3"), Error);
    }
    SUBCASE("unknown keys are rejected with their line") {
        CHECK_THROWS_WITH_AS(parse_scenario(with_line(kMinimalBinary, "grid.cellz = 3")),
                             doctest::Contains("unknown key"), Error);
        CHECK_THROWS_WITH_AS(parse_scenario(with_line(kMinimalBinary, "grid.cellz = 3")),
                             doctest::Contains("line 8"), Error);
    }
    SUBCASE("missing required key") {
        CHECK_THROWS_WITH_AS(parse_scenario("grid.cells = 8\n"), doctest::Contains("grid.length"),
                             Error);
    }
    SUBCASE("duplicate key") {
        CHECK_THROWS_WITH_AS(parse_scenario(with_line(kMinimalBinary, "t_end = 0.2")),
                             doctest::Contains("duplicate"), Error);
    }
    SUBCASE("bad preset parameters") {
        const std::string text =
            "grid.cells = 8\ngrid.length = 1\nspecies = 2\nd.1.2 = 1\n"
            "initial.preset = cosine_perturbation\ninitial.amplitudes = 0.9, -0.9\nt_end = 0.1\n";
        CHECK_THROWS_AS(parse_scenario(text), Error); // amplitude leaves [0,1]
    }
    SUBCASE("unknown preset") {
        const std::string text =
            "grid.cells = 8\ngrid.length = 1\nspecies = 2\nd.1.2 = 1\n"
            "initial.preset = wavelet\nt_end = 0.1\n";
        CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("wavelet"), Error);
    }
    SUBCASE("cfl out of range") {
        CHECK_THROWS_WITH_AS(parse_scenario(with_line(kMinimalBinary, "cfl = 1.5")),
                             doctest::Contains("cfl"), Error);
    }
    SUBCASE("negative t_end") {
        const std::string text =
            "grid.cells = 8\ngrid.length = 1\nspecies = 2\nd.1.2 = 1\n"
            "initial.preset = smoothed_step\nt_end = -0.1\n";
        CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("t_end"), Error);
    }
}

TEST_CASE("custom tables load from a side file") {
    const std::string dir = "msdiff_test_scenario_tmp";
    std::filesystem::create_directories(dir);
    {
        std::ofstream table(dir + "/table.csv");
        for (int k = 0; k < 8; ++k) table << "0.25, 0.75\n";
    }
    const std::string text =
        "grid.cells = 8\ngrid.length = 1\nspecies = 2\nd.1.2 = 1\n"
        "initial.preset = custom\ninitial.table_file = table.csv\nt_end = 0.1\n";
    const Scenario sc = parse_scenario(text, dir);
    CHECK(sc.initial.table(3, 1) == 0.75);

    const std::string missing =
        "grid.cells = 8\ngrid.length = 1\nspecies = 2\nd.1.2 = 1\n"
        "initial.preset = custom\ninitial.table_file = nope.csv\nt_end = 0.1\n";
    CHECK_THROWS_WITH_AS(parse_scenario(missing, dir), doctest::Contains("nope.csv"), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("scenario round-trips through its text form") {
    Scenario sc = testing::duncan_toor_scenario(24);
    sc.cfl = 0.4;
    sc.output_stride = 7;
    const Scenario reparsed = parse_scenario(scenario_to_text(sc));
    CHECK(reparsed.grid.num_cells == sc.grid.num_cells);
    CHECK(reparsed.grid.domain_length == sc.grid.domain_length);
    CHECK(reparsed.n_species == 3);
    CHECK(reparsed.d(1, 2) == sc.d(1, 2));
    CHECK(reparsed.cfl == sc.cfl);
    CHECK(reparsed.output_stride == 7);
    CHECK(reparsed.initial.kind == PresetKind::DuncanToor);
    CHECK(reparsed.initial.interface_width == sc.initial.interface_width);
}
