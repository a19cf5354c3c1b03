#include "experiment.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace msdiff;

TEST_CASE("initial presets") {
    SUBCASE("cosine with zero amplitude is uniform") {
        Scenario sc = testing::binary_cosine_scenario(16, 0.0);
        const MixtureState state = initial_state(sc);
        CHECK((state.concentrations.array() - 0.5).abs().maxCoeff() == 0.0);
    }
    SUBCASE("cosine matches the profile formula at cell centers") {
        Scenario sc = testing::binary_cosine_scenario(64, 0.3);
        const MixtureState state = initial_state(sc);
        for (int k = 0; k < 64; ++k) {
            const double expected = 0.5 + 0.3 * std::cos(M_PI * sc.grid.cell_center(k));
            CHECK(state.concentrations(k, 0) == doctest::Approx(expected).epsilon(1e-15));
        }
        // at the domain edge the formula value is 0.8
        CHECK(0.5 + 0.3 * std::cos(0.0) == doctest::Approx(0.8));
    }
    SUBCASE("amplitude validation") {
        Scenario sc = testing::binary_cosine_scenario(16);
        sc.initial.amplitudes = {0.3, -0.2};
        CHECK_THROWS_AS(initial_state(sc), Error); // sum != 0
        sc.initial.amplitudes = {0.6, -0.6};
        CHECK_THROWS_AS(initial_state(sc), Error); // leaves [0,1]
    }
    SUBCASE("duncan_toor sits on the simplex with a flat middle species") {
        Scenario sc = testing::duncan_toor_scenario(64);
        const MixtureState state = initial_state(sc);
        CHECK(validate_state(state).max_sum_deviation <= 1e-12);
        for (int k = 0; k < 64; ++k)
            CHECK(state.concentrations(k, 1) == doctest::Approx(0.2).epsilon(1e-14));
        CHECK(state.concentrations(0, 0) == doctest::Approx(0.8).epsilon(1e-5));
        CHECK(state.concentrations(63, 2) == doctest::Approx(0.8).epsilon(1e-5));
    }
    SUBCASE("smoothed step spans 0.25..0.75") {
        Scenario sc = testing::binary_cosine_scenario(64);
        sc.initial.kind = PresetKind::SmoothedStep;
        sc.initial.amplitudes.clear();
        const MixtureState state = initial_state(sc);
        CHECK(state.concentrations(0, 0) == doctest::Approx(0.75).epsilon(1e-5));
        CHECK(state.concentrations(63, 0) == doctest::Approx(0.25).epsilon(1e-5));
    }
}

TEST_CASE("stable_dt formula") {
    Matrix d(2, 2);
    d << 0, 1, 1, 0;
    CHECK(stable_dt(Grid1D(10, 1.0), BinaryDiffusivities(d), 0.25) ==
          doctest::Approx(0.25 * 0.01 / 2.0)); // 0.00125

    // halving dx quarters dt
    CHECK(stable_dt(Grid1D(20, 1.0), BinaryDiffusivities(d), 0.25) ==
          doctest::Approx(0.25 * 0.0025 / 2.0));

    Matrix d2(2, 2);
    d2 << 0, 2, 2, 0;
    CHECK(stable_dt(Grid1D(2, 2.0), BinaryDiffusivities(d2), 1.0) == doctest::Approx(0.25));

    CHECK_THROWS_AS(stable_dt(Grid1D(10, 1.0), BinaryDiffusivities(d), 0.0), Error);
    CHECK_THROWS_AS(stable_dt(Grid1D(10, 1.0), BinaryDiffusivities(d), 1.5), Error);
}

TEST_CASE("step: equilibrium fixed point and conservation") {
    Matrix d(3, 3);
    d << 0, 1, 2, 1, 0, 3, 2, 3, 0;
    const BinaryDiffusivities diff(d);
    const Grid1D grid(16, 1.0);

    SUBCASE("uniform states are exact fixed points") {
        Matrix c(16, 3);
        for (int k = 0; k < 16; ++k) c.row(k) << 0.2, 0.3, 0.5;
        const MixtureState state{c, 0.0};
        const StepResult result = step(state, grid, diff, 1e-4);
        CHECK(result.state.concentrations == state.concentrations);
        CHECK(result.repair_magnitude == 0.0);
    }

    SUBCASE("per-species mass is conserved through a step") {
        Scenario sc = testing::duncan_toor_scenario(32);
        const MixtureState state = initial_state(sc);
        const double dt = stable_dt(sc.grid, sc.d, sc.cfl);
        const StepResult result = step(state, sc.grid, sc.d, dt);
        for (int i = 0; i < 3; ++i) {
            const double before = state.concentrations.col(i).sum() * sc.grid.dx;
            const double after = result.state.concentrations.col(i).sum() * sc.grid.dx;
            CHECK(after == doctest::Approx(before).epsilon(1e-14));
        }
    }
}

TEST_CASE("binary step tracks the explicit heat update to O(dt dx^2)") {
    Scenario sc = testing::binary_cosine_scenario(64);
    const MixtureState state = initial_state(sc);
    const double dt = stable_dt(sc.grid, sc.d, sc.cfl);
    const StepResult result = step(state, sc.grid, sc.d, dt);

    const double diffusivity = sc.d(0, 1);
    const double lambda = diffusivity * dt / (sc.grid.dx * sc.grid.dx);
    double worst = 0.0;
    for (int k = 0; k < 64; ++k) {
        const double left = state.concentrations(std::max(k - 1, 0), 0);
        const double mid = state.concentrations(k, 0);
        const double right = state.concentrations(std::min(k + 1, 63), 0);
        const double heat = mid + lambda * (left - 2.0 * mid + right);
        worst = std::max(worst, std::abs(result.state.concentrations(k, 0) - heat));
    }
    // the sqrt-form face fluxes deviate from the Fickian ones at O(dx^2),
    // which a single step scales by dt/dx
    CHECK(worst <= 1e-5);
}

TEST_CASE("simulate: degenerate horizon and snapshot cadence") {
    Scenario sc = testing::binary_cosine_scenario(16);
    sc.t_end = 0.0;
    const Trajectory trajectory = simulate(sc);
    CHECK(trajectory.snapshots.size() == 1);
    CHECK(trajectory.ledger.size() == 1);
    CHECK(trajectory.ledger.front().residual == 0.0);
    CHECK(trajectory.snapshots.front().time == 0.0);
}

TEST_CASE("simulate: binary benchmark approaches the analytic heat solution") {
    Scenario sc = testing::binary_cosine_scenario(64);
    const Trajectory trajectory = simulate(sc);
    const auto l2 = binary_benchmark_l2_error(sc, trajectory);
    REQUIRE(l2.has_value());
    CHECK(*l2 <= 2e-3);
    CHECK(trajectory.snapshots.back().time == doctest::Approx(0.1));
}

TEST_CASE("simulate: mirror symmetry is preserved") {
    // reversing x maps species 1 <-> 2 for the equal-amplitude cosine profile
    Scenario sc = testing::binary_cosine_scenario(32, 0.3, 0.01);
    const Trajectory trajectory = simulate(sc);
    const Matrix& final = trajectory.snapshots.back().state.concentrations;
    const int cells = sc.grid.num_cells;
    double worst = 0.0;
    for (int k = 0; k < cells; ++k) {
        worst = std::max(worst, std::abs(final(k, 0) - final(cells - 1 - k, 1)));
        worst = std::max(worst, std::abs(final(k, 1) - final(cells - 1 - k, 0)));
    }
    CHECK(worst <= 1e-13);
}

TEST_CASE("simulate: uphill diffusion shows up for duncan_toor but not binary") {
    Scenario duncan = testing::duncan_toor_scenario(32, 0.05);
    const Trajectory ternary = simulate(duncan);
    CHECK(ternary.uphill_detected());

    Scenario binary = testing::binary_cosine_scenario(32, 0.3, 0.05);
    const Trajectory fickian = simulate(binary);
    CHECK_FALSE(fickian.uphill_detected());
}

TEST_CASE("simulate: heun integrator runs and conserves") {
    Scenario sc = testing::binary_cosine_scenario(32, 0.3, 0.02);
    sc.integrator = Integrator::Heun;
    const Trajectory trajectory = simulate(sc);
    CHECK(max_mass_drift(trajectory) <= 1e-12);
    CHECK(trajectory.sup_abs_residual() <= 1e-3);
}

TEST_CASE("an unstable step raises Stability with the step index") {
    Scenario sc;
    sc.grid = Grid1D(32, 1.0);
    sc.n_species = 2;
    Matrix d(2, 2);
    d << 0, 1, 1, 0;
    sc.d = BinaryDiffusivities(d);
    sc.initial.kind = PresetKind::Custom;
    Matrix table(32, 2);
    for (int k = 0; k < 32; ++k) {
        table(k, 0) = 0.5 + ((k % 2) ? 0.2 : -0.2); // sawtooth: marginal mode at cfl = 1
        table(k, 1) = 1.0 - table(k, 0);
    }
    sc.initial.table = table;
    sc.t_end = 0.5;
    sc.cfl = 1.0;
    CHECK_THROWS_WITH_AS(simulate(sc), doctest::Contains("step"), Error);
    try {
        simulate(sc);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Stability);
    }
}

TEST_CASE("fault injection: truncated fluxes leave a residual floor") {
    Scenario sc = testing::binary_cosine_scenario(32, 0.3, 0.05);
    const double clean = simulate(sc).sup_abs_residual();
    sc.flux_truncation = 0.01;
    const double lossy = simulate(sc).sup_abs_residual();
    CHECK(lossy > 10.0 * clean);
}
