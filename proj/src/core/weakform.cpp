#include "weakform.hpp"

#include <cmath>
#include <limits>

namespace msdiff {

double eta_sigma(double t, double sigma, double horizon) {
    if (!(sigma > 0.0 && sigma < horizon / 4.0))
        raise(ErrorCode::Config, "eta_sigma requires 0 < sigma < T/4");
    if (t <= sigma || t >= horizon - sigma) return 0.0;
    if (t <= 2.0 * sigma) return (t - sigma) / sigma;
    if (t <= horizon - 2.0 * sigma) return 1.0;
    return (horizon - t - sigma) / sigma;
}

namespace {

// Standard bump profile on (-1, 1), scaled to peak value 1.
double bump(double u) {
    const double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u2));
}

} // namespace

double TestFunction::spatial(double x, double domain_length) const {
    const double xn = x / domain_length;
    double value = 0.0;
    for (int p = static_cast<int>(spatial_coefficients.size()) - 1; p >= 0; --p)
        value = value * xn + spatial_coefficients(p);
    return value;
}

double TestFunction::spatial_derivative(double x, double domain_length) const {
    const double xn = x / domain_length;
    double value = 0.0;
    for (int p = static_cast<int>(spatial_coefficients.size()) - 1; p >= 1; --p)
        value = value * xn + p * spatial_coefficients(p);
    return value / domain_length;
}

double TestFunction::temporal(double t, double horizon) const {
    if (temporal_kind == Temporal::EtaSigma) return eta_sigma(t, sigma, horizon);
    return bump((t - center) / width);
}

void TestFunction::check_support(double horizon) const {
    if (temporal_kind == Temporal::EtaSigma) {
        if (!(sigma > 0.0 && sigma < horizon / 4.0))
            raise(ErrorCode::Config, "test function sigma outside (0, T/4)");
    } else {
        if (!(width > 0.0 && center - width > 0.0 && center + width < horizon))
            raise(ErrorCode::Config, "test function bump support exceeds (0, T)");
    }
}

namespace {

double bump_derivative(double u) {
    const double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    const double q = 1.0 - u2;
    return bump(u) * (-2.0 * u / (q * q));
}

struct MollifierKernel {
    int radius = 0;
    std::vector<double> weight;   // symmetric: weight[d] multiplies f[j-d] and f[j+d]
    std::vector<double> dweight;  // antisymmetric derivative kernel (value at +d)
};

// Discrete bump kernel of the given radius, normalized so constants are
// reproduced exactly. The derivative kernel shares the normalization so it
// consistently approximates d/dt of the mollified signal.
MollifierKernel build_kernel(double spacing, double epsilon) {
    if (!(epsilon > 0.0)) raise(ErrorCode::Config, "mollifier radius must be positive");
    if (!(spacing > 0.0) || spacing > epsilon / 4.0)
        raise(ErrorCode::Resolution, "sampling too coarse: need h <= epsilon/4");

    MollifierKernel kernel;
    kernel.radius = static_cast<int>(std::floor(epsilon / spacing));
    kernel.weight.assign(kernel.radius + 1, 0.0);
    kernel.dweight.assign(kernel.radius + 1, 0.0);
    kernel.weight[0] = bump(0.0);
    double total = bump(0.0);
    for (int d = 1; d <= kernel.radius; ++d) {
        kernel.weight[d] = bump(d * spacing / epsilon);
        total += 2.0 * kernel.weight[d];
    }
    for (int d = 0; d <= kernel.radius; ++d) {
        kernel.weight[d] /= total;
        // d/dt of the normalized kernel: rho'((t - tau)/eps) / (eps * total)
        kernel.dweight[d] = bump_derivative(d * spacing / epsilon) / (epsilon * total);
    }
    return kernel;
}

// Convolution with zero extension outside the sampling window.
std::vector<double> convolve(const std::vector<double>& signal, const MollifierKernel& kernel,
                             bool derivative) {
    const int n = static_cast<int>(signal.size());
    std::vector<double> out(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double acc = derivative ? 0.0 : kernel.weight[0] * signal[j];
        for (int d = 1; d <= kernel.radius; ++d) {
            const double left = (j - d >= 0) ? signal[j - d] : 0.0;
            const double right = (j + d < n) ? signal[j + d] : 0.0;
            acc += derivative ? kernel.dweight[d] * (left - right)
                              : kernel.weight[d] * (left + right);
        }
        out[j] = acc;
    }
    return out;
}

} // namespace

std::vector<double> mollify_time(const std::vector<double>& signal, double spacing,
                                 double epsilon) {
    return convolve(signal, build_kernel(spacing, epsilon), false);
}

namespace {

// Central difference in the interior, one-sided at the ends.
std::vector<double> discrete_derivative(const std::vector<double>& f, double h) {
    const int n = static_cast<int>(f.size());
    std::vector<double> df(n, 0.0);
    if (n < 2) return df;
    df[0] = (f[1] - f[0]) / h;
    df[n - 1] = (f[n - 1] - f[n - 2]) / h;
    for (int j = 1; j < n - 1; ++j) df[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
    return df;
}

double trapezoid_product(const std::vector<double>& a, const std::vector<double>& b, double h) {
    const int n = static_cast<int>(a.size());
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const double w = (j == 0 || j == n - 1) ? 0.5 * h : h;
        sum += w * a[j] * b[j];
    }
    return sum;
}

} // namespace

MolCommutationResult mol_commutation_check(const std::vector<double>& v,
                                           const std::vector<double>& phi, double spacing,
                                           double epsilon) {
    if (v.size() != phi.size() || v.size() < 3)
        raise(ErrorCode::Structural, "series must share a grid with at least 3 samples");
    double scale = 0.0;
    for (double p : phi) scale = std::max(scale, std::abs(p));
    if (std::abs(phi.front()) > 1e-13 * std::max(1.0, scale) ||
        std::abs(phi.back()) > 1e-13 * std::max(1.0, scale))
        raise(ErrorCode::Config, "phi must vanish at both endpoints");

    // The two sides take genuinely different routes: the left differentiates
    // the mollified test function through the kernel derivative, the right
    // mollifies the signal and differences the raw samples.
    const MollifierKernel kernel = build_kernel(spacing, epsilon);
    const std::vector<double> dphi_eps = convolve(phi, kernel, true);
    const std::vector<double> v_eps = convolve(v, kernel, false);

    MolCommutationResult result;
    result.lhs = trapezoid_product(v, dphi_eps, spacing);
    result.rhs = trapezoid_product(v_eps, discrete_derivative(phi, spacing), spacing);
    result.gap = std::abs(result.lhs - result.rhs);
    return result;
}

namespace {

struct TimeQuadrature {
    std::vector<double> theta;  // temporal part at snapshot times
    std::vector<double> dtheta; // paired weights: w_j (D theta)_j = (theta_{j+1} - theta_{j-1})/2
    std::vector<double> weight; // trapezoid weights
};

// The discrete temporal derivative is paired with the trapezoid weight so
// that sum_j weight_j v_j (D theta)_j telescopes exactly for constant v.
TimeQuadrature time_quadrature(const Trajectory& trajectory, const TestFunction& phi) {
    const auto& snaps = trajectory.snapshots;
    const int n = static_cast<int>(snaps.size());
    if (n < 5) raise(ErrorCode::Resolution, "trajectory has too few snapshots for a weak-form audit");
    const double horizon = snaps.back().time;
    phi.check_support(horizon);

    TimeQuadrature q;
    q.theta.resize(n);
    q.dtheta.resize(n);
    q.weight.resize(n);
    for (int j = 0; j < n; ++j) q.theta[j] = phi.temporal(snaps[j].time, horizon);
    for (int j = 0; j < n; ++j) {
        const int lo = std::max(0, j - 1);
        const int hi = std::min(n - 1, j + 1);
        q.dtheta[j] = 0.5 * (q.theta[hi] - q.theta[lo]);
        q.weight[j] = 0.5 * (snaps[hi].time - snaps[lo].time);
    }
    return q;
}

} // namespace

double weak_residual(const Trajectory& trajectory, const TestFunction& phi, int species) {
    const TimeQuadrature q = time_quadrature(trajectory, phi);
    const Grid1D& grid = trajectory.grid;
    const double L = grid.domain_length;

    double residual = 0.0;
    for (size_t j = 0; j < trajectory.snapshots.size(); ++j) {
        const Snapshot& snap = trajectory.snapshots[j];

        double mass_term = 0.0;
        for (int k = 0; k < grid.num_cells; ++k)
            mass_term += snap.state.concentrations(k, species) * phi.spatial(grid.cell_center(k), L);
        residual += mass_term * grid.dx * q.dtheta[j];

        double flux_term = 0.0;
        for (int f = 0; f < grid.num_interior_faces(); ++f)
            flux_term += snap.fluxes.j(f + 1, species) *
                         phi.spatial_derivative(grid.face_position(f), L);
        residual += flux_term * grid.dx * q.weight[j] * q.theta[j];
    }
    return residual;
}

Beta beta_identity() {
    return Beta{"s", [](double s) { return s; }, [](double) { return 1.0; },
                [](double) { return 0.0; }};
}

Beta beta_entropy_integrand() {
    return Beta{"s ln s - s",
                [](double s) { return s > 0.0 ? s * (std::log(s) - 1.0) : 0.0; },
                [](double s) { return std::log(s); },
                [](double s) { return 1.0 / s; }};
}

std::vector<Beta> beta_bank() {
    std::vector<Beta> bank;
    bank.push_back(Beta{"s^2", [](double s) { return s * s; }, [](double s) { return 2.0 * s; },
                        [](double) { return 2.0; }});
    bank.push_back(Beta{"s^3", [](double s) { return s * s * s; },
                        [](double s) { return 3.0 * s * s; }, [](double s) { return 6.0 * s; }});
    bank.push_back(Beta{"(s+1)ln(s+1)", [](double s) { return (s + 1.0) * std::log1p(s); },
                        [](double s) { return std::log1p(s) + 1.0; },
                        [](double s) { return 1.0 / (s + 1.0); }});
    // Smooth bump in s, supported inside (0.1, 0.9).
    const double center = 0.5, width = 0.4;
    auto u = [center, width](double s) { return (s - center) / width; };
    bank.push_back(Beta{
        "bump", [u](double s) { return bump(u(s)); },
        [u, width](double s) {
            const double x = u(s);
            if (x * x >= 1.0) return 0.0;
            const double q = 1.0 - x * x;
            return bump(x) * (-2.0 * x / (q * q)) / width;
        },
        [u, width](double s) {
            const double x = u(s);
            if (x * x >= 1.0) return 0.0;
            const double q = 1.0 - x * x;
            const double a = -2.0 * x / (q * q);
            const double da = -2.0 / (q * q) - 8.0 * x * x / (q * q * q);
            return bump(x) * (a * a + da) / (width * width);
        }});
    return bank;
}

void check_beta_admissible(const Beta& beta) {
    // C^2([0, inf)) requires finite one-sided derivatives at 0 and finite
    // values on the concentration range.
    const double f0 = beta.f(0.0);
    const double df0 = beta.df(0.0);
    const double ddf0 = beta.ddf(0.0);
    if (!std::isfinite(f0) || !std::isfinite(df0) || !std::isfinite(ddf0))
        raise(ErrorCode::Config,
              "beta '" + beta.name + "' is not admissible: not C^2 up to s = 0");
    for (double s = 0.0; s <= 1.0; s += 0.125) {
        if (!std::isfinite(beta.f(s)) || !std::isfinite(beta.df(s)))
            raise(ErrorCode::Config, "beta '" + beta.name + "' is not finite on [0, 1]");
    }
}

double renormalized_residual(const Trajectory& trajectory, const Beta& beta,
                             const TestFunction& phi, int species) {
    check_beta_admissible(beta);
    const TimeQuadrature q = time_quadrature(trajectory, phi);
    const Grid1D& grid = trajectory.grid;
    const double L = grid.domain_length;

    double residual = 0.0;
    for (size_t j = 0; j < trajectory.snapshots.size(); ++j) {
        const Snapshot& snap = trajectory.snapshots[j];
        const auto& c = snap.state.concentrations;

        double mass_term = 0.0;
        for (int k = 0; k < grid.num_cells; ++k)
            mass_term += beta.f(c(k, species)) * phi.spatial(grid.cell_center(k), L);
        residual += mass_term * grid.dx * q.dtheta[j];

        double face_terms = 0.0;
        for (int f = 0; f < grid.num_interior_faces(); ++f) {
            const double x = grid.face_position(f);
            const double c_left = c(f, species);
            const double c_right = c(f + 1, species);
            const double j_face = snap.fluxes.j(f + 1, species);
            // div(beta'(c) J) tested against phi ...
            face_terms += beta.df(0.5 * (c_left + c_right)) * j_face * phi.spatial_derivative(x, L);
            // ... plus the chain-rule source J . grad beta'(c), with the
            // discrete gradient of beta'(c) so spatial summation by parts is exact
            face_terms += j_face * (beta.df(c_right) - beta.df(c_left)) / grid.dx * phi.spatial(x, L);
        }
        residual += face_terms * grid.dx * q.weight[j] * q.theta[j];
    }
    return residual;
}

std::vector<TestFunction> test_function_bank(double horizon) {
    std::vector<TestFunction> bank;
    for (int degree = 0; degree <= 4; ++degree) {
        Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(degree + 1);
        coeffs(degree) = 1.0;

        TestFunction eta;
        eta.spatial_coefficients = coeffs;
        eta.temporal_kind = TestFunction::Temporal::EtaSigma;
        eta.sigma = horizon / 8.0;
        eta.name = "x^" + std::to_string(degree) + "*eta(T/8)";
        bank.push_back(eta);

        TestFunction smooth;
        smooth.spatial_coefficients = coeffs;
        smooth.temporal_kind = TestFunction::Temporal::SmoothBump;
        smooth.center = horizon / 2.0;
        smooth.width = horizon / 4.0;
        smooth.name = "x^" + std::to_string(degree) + "*bump(T/2,T/4)";
        bank.push_back(smooth);
    }
    return bank;
}

namespace {

double snapshot_l2_distance(const Snapshot& a, const Snapshot& b, double dx) {
    return std::sqrt((a.state.concentrations - b.state.concentrations).squaredNorm() * dx);
}

double entropy_series_commutation_gap(const Trajectory& trajectory) {
    // Canonical pair: v = the entropy series on its uniform leading part,
    // phi = a smooth bump over the same window.
    const auto& ledger = trajectory.ledger;
    if (ledger.size() < 32) return 0.0;
    size_t n = ledger.size();
    const double h = ledger[1].t - ledger[0].t;
    if (std::abs((ledger[n - 1].t - ledger[n - 2].t) - h) > 1e-12 * h) --n; // drop partial final step
    const double window = (n - 1) * h;

    std::vector<double> v(n), phi(n);
    for (size_t j = 0; j < n; ++j) {
        v[j] = ledger[j].entropy;
        phi[j] = bump((j * h - 0.5 * window) / (0.25 * window));
    }
    return mol_commutation_check(v, phi, h, std::max(4.0 * h, window / 16.0)).gap;
}

} // namespace

AuditReport audit_definition(const Trajectory& trajectory) {
    AuditReport report;
    if (trajectory.snapshots.empty()) return report;
    const Grid1D& grid = trajectory.grid;

    report.min_concentration = std::numeric_limits<double>::infinity();
    report.max_concentration = -std::numeric_limits<double>::infinity();
    for (const Snapshot& snap : trajectory.snapshots) {
        const SimplexDiagnostics diag = validate_state(snap.state);
        report.min_concentration = std::min(report.min_concentration, diag.min_concentration);
        report.max_concentration =
            std::max(report.max_concentration, snap.state.concentrations.maxCoeff());
        report.max_sum_deviation = std::max(report.max_sum_deviation, diag.max_sum_deviation);
    }
    report.bounds_ok =
        report.min_concentration >= -1e-12 && report.max_concentration <= 1.0 + 1e-12;
    report.simplex_ok = report.max_sum_deviation <= 1e-12 && report.min_concentration >= -1e-12;

    // Discrete L2(0,T; H1) norm of sqrt(c), trapezoid in time.
    double h1_accum = 0.0;
    const int n_snaps = static_cast<int>(trajectory.snapshots.size());
    for (int j = 0; j < n_snaps; ++j) {
        const Snapshot& snap = trajectory.snapshots[j];
        const Matrix grad = face_grad_sqrt(snap.state, grid);
        const double space = snap.state.concentrations.sum() * grid.dx +
                             grad.squaredNorm() * grid.dx;
        double w = 0.0;
        if (j > 0) w += 0.5 * (snap.time - trajectory.snapshots[j - 1].time);
        if (j + 1 < n_snaps) w += 0.5 * (trajectory.snapshots[j + 1].time - snap.time);
        h1_accum += w * space;
    }
    report.sqrt_h1_norm = std::sqrt(h1_accum);

    for (int j = 0; j + 1 < n_snaps; ++j)
        report.continuity_modulus =
            std::max(report.continuity_modulus,
                     snapshot_l2_distance(trajectory.snapshots[j], trajectory.snapshots[j + 1],
                                          grid.dx));
    // The continuity threshold is a discretization-level stand-in for
    // C([0,T]; L2): consecutive snapshots may not jump by an O(1) amount.
    report.regularity_ok = std::isfinite(report.sqrt_h1_norm) && report.continuity_modulus <= 0.05;

    report.mol_commutation_gap = entropy_series_commutation_gap(trajectory);

    if (n_snaps >= 5 && trajectory.snapshots.back().time > 0.0) {
        const double horizon = trajectory.snapshots.back().time;
        const auto bank = test_function_bank(horizon);
        const auto betas = beta_bank();
        for (int i = 0; i < trajectory.snapshots.front().state.n_species(); ++i) {
            for (const TestFunction& phi : bank) {
                const double value = weak_residual(trajectory, phi, i);
                report.weak_residuals.push_back({i, phi.name, value});
                report.max_weak_residual = std::max(report.max_weak_residual, std::abs(value));
            }
            for (const Beta& beta : betas) {
                double worst = 0.0;
                for (const TestFunction& phi : bank)
                    worst = std::max(worst,
                                     std::abs(renormalized_residual(trajectory, beta, phi, i)));
                report.renorm_residuals.push_back({i, beta.name, worst});
                report.max_renorm_residual = std::max(report.max_renorm_residual, worst);
            }
        }
    }
    return report;
}

} // namespace msdiff
