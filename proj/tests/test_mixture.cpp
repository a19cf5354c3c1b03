#include "test_helpers.hpp"

#include <doctest.h>

using namespace msdiff;
using msdiff::testing::Rng;

TEST_CASE("grid geometry") {
    const Grid1D grid(4, 2.0);
    CHECK(grid.dx == doctest::Approx(0.5));
    CHECK(grid.cell_center(0) == doctest::Approx(0.25));
    CHECK(grid.face_position(0) == doctest::Approx(0.5));
    CHECK(grid.num_interior_faces() == 3);
    CHECK_THROWS_AS(Grid1D(1, 1.0), Error);
    CHECK_THROWS_AS(Grid1D(4, 0.0), Error);
}

TEST_CASE("diffusivity validation") {
    Matrix good(2, 2);
    good << 0, 1, 1, 0;
    CHECK(BinaryDiffusivities(good).max_coefficient() == doctest::Approx(1.0));

    Matrix asym(2, 2);
    asym << 0, 1, 2, 0;
    CHECK_THROWS_AS((BinaryDiffusivities(asym)), Error);

    Matrix negative(2, 2);
    negative << 0, -1, -1, 0;
    CHECK_THROWS_AS((BinaryDiffusivities(negative)), Error);
}

TEST_CASE("validate_state examples") {
    MixtureState uniform{Matrix::Constant(4, 2, 0.5), 0.0};
    SimplexDiagnostics diag = validate_state(uniform);
    CHECK(diag.min_concentration == doctest::Approx(0.5));
    CHECK(diag.max_sum_deviation == doctest::Approx(0.0));
    CHECK(diag.negative_cell_count == 0);

    Matrix over(1, 2);
    over << 0.7, 0.4;
    diag = validate_state(MixtureState{over, 0.0});
    CHECK(diag.max_sum_deviation == doctest::Approx(0.1));

    Matrix negative(1, 2);
    negative << -0.01, 1.01;
    diag = validate_state(MixtureState{negative, 0.0});
    CHECK(diag.negative_cell_count == 1);
    CHECK(diag.max_sum_deviation <= 1e-12);
}

TEST_CASE("project_to_simplex examples") {
    Matrix on_simplex(1, 2);
    on_simplex << 0.5, 0.5;
    CHECK(project_to_simplex(on_simplex).concentrations == on_simplex);

    Matrix clip(1, 3);
    clip << -0.02, 0.52, 0.52;
    const MixtureState projected = project_to_simplex(clip);
    CHECK(projected.concentrations(0, 0) == 0.0);
    CHECK(projected.concentrations(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(projected.concentrations(0, 2) == doctest::Approx(0.5).epsilon(1e-15));

    Matrix scaled(1, 2);
    scaled << 2.0, 2.0;
    CHECK(project_to_simplex(scaled).concentrations(0, 0) == doctest::Approx(0.5));

    Matrix dead(1, 2);
    dead << -1.0, 0.0;
    CHECK_THROWS_AS(project_to_simplex(dead), Error);
}

TEST_CASE("project_to_simplex is idempotent on random input") {
    Rng rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        const int cells = rng.integer(1, 6);
        const int n = rng.integer(2, 6);
        Matrix raw(cells, n);
        for (int k = 0; k < cells; ++k) {
            for (int i = 0; i < n; ++i) raw(k, i) = rng.uniform(-0.2, 1.0);
            if (raw.row(k).cwiseMax(0.0).sum() <= 0.0) raw(k, 0) = 0.5;
        }
        const MixtureState once = project_to_simplex(raw);
        const MixtureState twice = project_to_simplex(once.concentrations);
        CHECK((twice.concentrations - once.concentrations).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK(validate_state(once).max_sum_deviation <= 1e-15);
        CHECK(validate_state(once).negative_cell_count == 0);
    }
}

TEST_CASE("face_values examples and simplex preservation") {
    Grid1D grid(2, 1.0);
    Matrix c(2, 2);
    c << 1.0, 0.0, 0.0, 1.0;
    Matrix faces = face_values(MixtureState{c, 0.0}, grid);
    CHECK(faces(0, 0) == doctest::Approx(0.5));
    CHECK(faces(0, 1) == doctest::Approx(0.5));

    c << 0.3, 0.7, 0.3, 0.7;
    faces = face_values(MixtureState{c, 0.0}, grid);
    CHECK(faces(0, 0) == doctest::Approx(0.3));

    c << 0.2, 0.8, 0.4, 0.6;
    faces = face_values(MixtureState{c, 0.0}, grid);
    CHECK(faces(0, 0) == doctest::Approx(0.3));
    CHECK(faces(0, 1) == doctest::Approx(0.7));

    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int cells = rng.integer(2, 16);
        const int n = rng.integer(2, 5);
        Matrix random(cells, n);
        for (int k = 0; k < cells; ++k) random.row(k) = testing::random_simplex(rng, n).transpose();
        const Matrix f = face_values(MixtureState{random, 0.0}, Grid1D(cells, 1.0));
        for (int row = 0; row < f.rows(); ++row) {
            CHECK(std::abs(f.row(row).sum() - 1.0) <= 1e-15);
            CHECK(f.row(row).minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("face_grad_sqrt examples") {
    Grid1D grid(2, 1.0);
    Matrix c(2, 2);
    c << 0.3, 0.7, 0.3, 0.7;
    CHECK(face_grad_sqrt(MixtureState{c, 0.0}, grid).cwiseAbs().maxCoeff() == 0.0);

    const Grid1D half(2, 1.0); // dx = 0.5
    c << 0.0, 1.0, 0.25, 0.75;
    const Matrix grad = face_grad_sqrt(MixtureState{c, 0.0}, half);
    CHECK(grad(0, 0) == doctest::Approx((0.5 - 0.0) / 0.5)); // = 1.0
}

TEST_CASE("face_grad_sqrt is exact for affine sqrt profiles") {
    const int cells = 32;
    const Grid1D grid(cells, 1.0);
    const double slope = 0.4, offset = 0.2;
    Matrix c(cells, 2);
    for (int k = 0; k < cells; ++k) {
        const double root = offset + slope * grid.cell_center(k);
        c(k, 0) = root * root;
        c(k, 1) = 1.0 - c(k, 0);
    }
    const Matrix grad = face_grad_sqrt(MixtureState{c, 0.0}, grid);
    for (int f = 0; f < grad.rows(); ++f)
        CHECK(grad(f, 0) == doctest::Approx(slope).epsilon(1e-13));
}

TEST_CASE("face compatibility defect is small but not zero") {
    // sum_i sqrt(c_face,i) * 2 grad sqrt(c_i) is O(dx^2), not exactly zero
    const int cells = 64;
    const Grid1D grid(cells, 1.0);
    Matrix c(cells, 2);
    for (int k = 0; k < cells; ++k) {
        c(k, 0) = 0.5 + 0.3 * std::cos(M_PI * grid.cell_center(k));
        c(k, 1) = 1.0 - c(k, 0);
    }
    const MixtureState state{c, 0.0};
    const Matrix faces = face_values(state, grid);
    const Matrix grad = face_grad_sqrt(state, grid);
    double worst = 0.0;
    for (int f = 0; f < grad.rows(); ++f) {
        const double defect =
            2.0 * faces.row(f).cwiseMax(0.0).cwiseSqrt().dot(grad.row(f));
        worst = std::max(worst, std::abs(defect));
    }
    CHECK(worst > 0.0);
    CHECK(worst < 1e-3);
}
