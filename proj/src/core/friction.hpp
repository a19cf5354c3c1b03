#pragma once

#include "mixture.hpp"

namespace msdiff {

/// Friction matrix A(c) of the flux system A m = -2 grad(sqrt(c)):
///   A_ij = -sqrt(c_i c_j)/D_ij   (i != j)
///   A_ii = sum_{k != i} c_k/D_ik
/// A is symmetric positive semidefinite and annihilates the kernel vector
/// s = (sqrt(c_1), ..., sqrt(c_n)).
struct FrictionMatrix {
    Eigen::MatrixXd a;
    Eigen::VectorXd c;             // simplex point the matrix was assembled at
    Eigen::VectorXd kernel_vector; // s_i = sqrt(c_i)
};

FrictionMatrix assemble_friction_matrix(const Eigen::VectorXd& c, const BinaryDiffusivities& d);

struct BottDuffinResult {
    Eigen::VectorXd m;
    double defect = 0.0;    ///< norm of the RHS component outside s-perp
    double condition = 0.0; ///< condition number of A P_L + P_{L-perp}
    bool degenerate = false; ///< numerical rank of the composition fell below n
};

/// Reusable workspace for the per-face solves. One instance per thread;
/// repeated calls reuse the SVD allocation.
class FrictionSolver {
public:
    explicit FrictionSolver(int n_species);

    /// Bott-Duffin constrained solve on L = s-perp:
    ///   m = P_L (A P_L + P_{L-perp})^{-1} P_L b,   P_L = I - s s^T/|s|^2.
    /// The composition is factored by SVD; singular values below
    /// 1e-12 * sigma_max are cut off, so a rank-deficient composition yields
    /// the minimal-norm solution and sets `degenerate` instead of failing.
    /// m satisfies m . s = 0 exactly (post-projection).
    BottDuffinResult bott_duffin(const FrictionMatrix& A, const Eigen::VectorXd& b);

    /// Independent oracle: minimal-norm least-squares solution of A m = b via
    /// SVD of A itself with cutoff 1e-12 * sigma_max. Agrees with bott_duffin
    /// to 1e-10 relative when ker(A) = span{s} and b is in s-perp.
    Eigen::VectorXd moore_penrose(const FrictionMatrix& A, const Eigen::VectorXd& b);

private:
    Eigen::MatrixXd composed_;
    Eigen::VectorXd projected_, solution_;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd_;
};

/// Convenience wrappers allocating a fresh workspace.
BottDuffinResult bott_duffin_solve(const FrictionMatrix& A, const Eigen::VectorXd& b);
Eigen::VectorXd moore_penrose_solve(const FrictionMatrix& A, const Eigen::VectorXd& b);

/// Per-face fluxes for a whole state. Rows span all num_cells+1 faces;
/// the first and last row are zero (no-flux boundary).
struct FluxSolution {
    Matrix m;                 ///< auxiliary fluxes m_i = sqrt(c_i) u_i
    Matrix j;                 ///< molar fluxes J_i = sqrt(c_face,i) m_i
    Vector rhs_defect;        ///< per-face norm of the RHS component outside image(A)
    std::vector<int> degenerate_faces; ///< faces where the composition lost rank

    int num_faces() const { return static_cast<int>(m.rows()); }
};

/// Assemble and solve the friction system at every interior face:
/// A(c_face) m = -2 grad(sqrt(c)), subject to m . s = 0.
/// Raises Solver (with the face index and composition) when a rank-deficient
/// face admits no solution within 1e-10 * |b|.
FluxSolution flux_from_state(const MixtureState& state, const Grid1D& grid,
                             const BinaryDiffusivities& d);

/// Entropy dissipation density at one face:
///   (1/2) sum_{i != j} (1/D_ij) |sqrt(c_j) m_i - sqrt(c_i) m_j|^2,
/// which equals m^T A(c) m identically. Nonnegative by construction.
double dissipation_density(const Eigen::VectorXd& c, const Eigen::VectorXd& m,
                           const BinaryDiffusivities& d);

} // namespace msdiff
