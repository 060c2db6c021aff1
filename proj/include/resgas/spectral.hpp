#pragma once

#include <Eigen/Dense>

namespace resgas {

// Largest absolute eigenvalue of a square real matrix.
double spectral_radius(const Eigen::MatrixXd& m);

}  // namespace resgas
