#include "friction.hpp"

#include <cmath>
#include <sstream>

namespace msdiff {

namespace {

constexpr double kSvdCutoffRel = 1e-12;       // singular values below this * sigma_max are rank 0
constexpr double kDegenerateCondition = 1e14; // composition condition flagging threshold
constexpr double kFaceResidualRel = 1e-10;    // per-face solvability requirement

} // namespace

FrictionMatrix assemble_friction_matrix(const Eigen::VectorXd& c, const BinaryDiffusivities& d) {
    const int n = static_cast<int>(c.size());
    if (n != d.n_species())
        raise(ErrorCode::Structural, "composition/diffusivity size mismatch");

    FrictionMatrix fm;
    fm.c = c;
    fm.kernel_vector = c.cwiseMax(0.0).cwiseSqrt();
    fm.a.resize(n, n);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            fm.a(i, j) = -fm.kernel_vector(i) * fm.kernel_vector(j) / d(i, j);
            diag += c(j) / d(i, j);
        }
        fm.a(i, i) = diag;
    }
    return fm;
}

FrictionSolver::FrictionSolver(int n_species)
    : composed_(n_species, n_species),
      projected_(n_species),
      solution_(n_species),
      svd_(n_species, n_species, Eigen::ComputeFullU | Eigen::ComputeFullV) {}

BottDuffinResult FrictionSolver::bott_duffin(const FrictionMatrix& A, const Eigen::VectorXd& b) {
    const Eigen::VectorXd& s = A.kernel_vector;
    const double s_norm2 = s.squaredNorm();
    if (!(s_norm2 > 0.0))
        raise(ErrorCode::Solver, "friction kernel vector vanishes (all concentrations zero)");

    // P_L b = b - shat (shat.b); the removed component is the reported defect.
    const Eigen::VectorXd shat = s / std::sqrt(s_norm2);
    const double along_kernel = shat.dot(b);
    projected_ = b - along_kernel * shat;

    // A P_L + P_{L-perp} = A - (A shat) shat^T + shat shat^T.
    composed_.noalias() = A.a;
    composed_.noalias() -= (A.a * shat) * shat.transpose();
    composed_.noalias() += shat * shat.transpose();

    svd_.compute(composed_);
    const auto& sv = svd_.singularValues();
    const double sigma_max = sv(0);
    const double sigma_min = sv(sv.size() - 1);

    BottDuffinResult result;
    result.defect = std::abs(along_kernel);
    result.condition = sigma_min > 0.0 ? sigma_max / sigma_min
                                       : std::numeric_limits<double>::infinity();
    result.degenerate = !(result.condition <= kDegenerateCondition);

    const double cutoff = kSvdCutoffRel * sigma_max;
    solution_.setZero(s.size());
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) <= cutoff) break;
        solution_.noalias() +=
            svd_.matrixV().col(i) * (svd_.matrixU().col(i).dot(projected_) / sv(i));
    }
    result.m = solution_ - shat.dot(solution_) * shat;
    return result;
}

Eigen::VectorXd FrictionSolver::moore_penrose(const FrictionMatrix& A, const Eigen::VectorXd& b) {
    svd_.compute(A.a);
    const auto& sv = svd_.singularValues();
    const double cutoff = kSvdCutoffRel * sv(0);
    solution_.setZero(b.size());
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) <= cutoff) break;
        solution_.noalias() += svd_.matrixV().col(i) * (svd_.matrixU().col(i).dot(b) / sv(i));
    }
    return solution_;
}

BottDuffinResult bott_duffin_solve(const FrictionMatrix& A, const Eigen::VectorXd& b) {
    FrictionSolver solver(static_cast<int>(A.c.size()));
    return solver.bott_duffin(A, b);
}

Eigen::VectorXd moore_penrose_solve(const FrictionMatrix& A, const Eigen::VectorXd& b) {
    FrictionSolver solver(static_cast<int>(A.c.size()));
    return solver.moore_penrose(A, b);
}

FluxSolution flux_from_state(const MixtureState& state, const Grid1D& grid,
                             const BinaryDiffusivities& d) {
    const int n = state.n_species();
    if (n != d.n_species())
        raise(ErrorCode::Structural, "state/diffusivity species mismatch");

    const Matrix face_c = face_values(state, grid);
    const Matrix grad = face_grad_sqrt(state, grid);

    FluxSolution flux;
    flux.m = Matrix::Zero(grid.num_cells + 1, n);
    flux.j = Matrix::Zero(grid.num_cells + 1, n);
    flux.rhs_defect = Vector::Zero(grid.num_cells + 1);

    FrictionSolver solver(n);
    Eigen::VectorXd c_face(n), b(n);
    for (int f = 0; f < grid.num_interior_faces(); ++f) {
        c_face = face_c.row(f);
        b = -2.0 * grad.row(f).transpose();
        const FrictionMatrix A = assemble_friction_matrix(c_face, d);
        const BottDuffinResult r = solver.bott_duffin(A, b);

        const int face_index = f + 1; // global face numbering includes boundaries
        if (r.degenerate) {
            const Eigen::VectorXd projected = b - A.kernel_vector.dot(b) /
                                                     A.kernel_vector.squaredNorm() *
                                                     A.kernel_vector;
            const double residual = (A.a * r.m - projected).norm();
            if (residual > kFaceResidualRel * std::max(1.0, b.norm())) {
                std::ostringstream msg;
                msg << "degenerate friction composition at face " << face_index
                    << " (condition " << r.condition << ", c = [";
                for (int i = 0; i < n; ++i) msg << (i ? ", " : "") << c_face(i);
                msg << "])";
                raise(ErrorCode::Solver, msg.str());
            }
            flux.degenerate_faces.push_back(face_index);
        }

        flux.m.row(face_index) = r.m;
        flux.j.row(face_index) =
            r.m.transpose().cwiseProduct(A.kernel_vector.transpose());
        flux.rhs_defect(face_index) = r.defect;
    }
    return flux;
}

double dissipation_density(const Eigen::VectorXd& c, const Eigen::VectorXd& m,
                           const BinaryDiffusivities& d) {
    const int n = static_cast<int>(c.size());
    const Eigen::VectorXd s = c.cwiseMax(0.0).cwiseSqrt();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double diff = s(j) * m(i) - s(i) * m(j);
            sum += diff * diff / d(i, j);
        }
    }
    return sum; // the ordered double sum counts each pair twice; 1/2 * 2 = 1
}

} // namespace msdiff
