#include "resgas/spectral.hpp"

#include <Eigen/Eigenvalues>

#include "resgas/errors.hpp"

namespace resgas {

double spectral_radius(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw DataError("spectral_radius: matrix must be square");
    if (m.rows() == 0) return 0.0;

    // Random uniform reservoirs have clustered top eigenvalue moduli (a real
    // eigenvalue and complex pairs within a fraction of a percent), which
    // power-type iterations cannot resolve reliably; use a full real-Schur
    // eigensolve instead.
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("spectral_radius: eigensolver failed to converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace resgas
