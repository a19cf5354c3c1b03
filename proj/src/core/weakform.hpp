#pragma once

#include "trajectory.hpp"

#include <functional>
#include <string>

namespace msdiff {

/// Piecewise-linear cut-off in time: 0 outside [sigma, T - sigma], linear
/// ramps on [sigma, 2 sigma] and [T - 2 sigma, T - sigma], 1 on the plateau.
/// Requires 0 < sigma < T/4.
double eta_sigma(double t, double sigma, double horizon);

/// Space-time test function: polynomial in x/L (degree <= 4) times a
/// compactly supported temporal part, so phi vanishes at t = 0 and t = T.
struct TestFunction {
    enum class Temporal { EtaSigma, SmoothBump };

    Eigen::VectorXd spatial_coefficients; // phi_sp(x) = sum_p coeff[p] (x/L)^p
    Temporal temporal_kind = Temporal::EtaSigma;
    double sigma = 0.0;  // EtaSigma
    double center = 0.0; // SmoothBump
    double width = 0.0;  // SmoothBump
    std::string name;

    double spatial(double x, double domain_length) const;
    double spatial_derivative(double x, double domain_length) const;
    double temporal(double t, double horizon) const;
    /// Raises Config when the temporal support is not contained in (0, T).
    void check_support(double horizon) const;
};

/// Discrete mollification: convolution with a normalized symmetric bump
/// kernel of radius epsilon; the signal is treated as zero outside its
/// sampling window. Requires h <= epsilon/4.
std::vector<double> mollify_time(const std::vector<double>& signal, double spacing,
                                 double epsilon);

struct MolCommutationResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};

/// Check int v d/dt(phi^eps) = int v^eps d/dt(phi) discretely (trapezoid in
/// time, central differences for d/dt). phi must vanish at both endpoints.
MolCommutationResult mol_commutation_check(const std::vector<double>& v,
                                           const std::vector<double>& phi, double spacing,
                                           double epsilon);

/// Weak-form residual of the continuity equation for one species:
///   int int c_i dphi/dt + int int sqrt(c_i) m_i dphi/dx
/// over the trajectory snapshots (midpoint in space, trapezoid in time; the
/// temporal derivative is the discrete derivative of the sampled temporal
/// part, so constant-in-time fields test to rounding).
double weak_residual(const Trajectory& trajectory, const TestFunction& phi, int species);

/// Twice-differentiable renormalization function with enough metadata to
/// check the paper-side admissibility requirement (C^2 up to s = 0).
struct Beta {
    std::string name;
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> ddf;
};

/// Built-in bank: s^2, s^3, (s+1)ln(s+1), a smooth compactly supported bump.
std::vector<Beta> beta_bank();
Beta beta_identity();
/// The classical entropy integrand s ln s - s; not C^1 at s = 0, so
/// renormalized_residual rejects it.
Beta beta_entropy_integrand();

/// Raises Config when beta is not C^2 up to 0 (df/ddf non-finite at 0) or not
/// finite on [0, 1].
void check_beta_admissible(const Beta& beta);

/// Weak-form residual of the renormalization identity
///   d/dt beta(c_i) + div(beta'(c_i) c_i u_i) = c_i u_i . grad beta'(c_i)
/// for one species against one test function.
double renormalized_residual(const Trajectory& trajectory, const Beta& beta,
                             const TestFunction& phi, int species);

struct WeakResidualEntry {
    int species = 0;
    std::string test_function;
    double value = 0.0;
};

struct RenormResidualEntry {
    int species = 0;
    std::string beta;
    double value = 0.0;
};

struct AuditReport {
    bool bounds_ok = false;     // Definition item (ii): c in [0,1]
    bool simplex_ok = false;    // item (iii): nonnegative, rows sum to 1
    bool regularity_ok = false; // item (iv): finite sqrt-H1 norm, small continuity modulus
    double min_concentration = 0.0;
    double max_concentration = 0.0;
    double max_sum_deviation = 0.0;
    double sqrt_h1_norm = 0.0;        // discrete L2-in-time H1-in-space norm of sqrt(c)
    double continuity_modulus = 0.0;  // max_j |c(t_{j+1}) - c(t_j)|_{L2}
    double mol_commutation_gap = 0.0; // canonical commutation check on the entropy series
    std::vector<WeakResidualEntry> weak_residuals;
    std::vector<RenormResidualEntry> renorm_residuals;
    double max_weak_residual = 0.0;
    double max_renorm_residual = 0.0;
};

/// The fixed test-function bank used by audit_definition: polynomials of
/// degree 0..4 crossed with {eta_sigma(T/8), bump(T/2, T/4)}.
std::vector<TestFunction> test_function_bank(double horizon);

/// Discrete audit of Definition-of-weak-solution items (ii)-(iv) plus the
/// weak and renormalized residual banks. Report-only; never raises for a
/// failing check.
AuditReport audit_definition(const Trajectory& trajectory);

} // namespace msdiff
