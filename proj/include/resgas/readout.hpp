#pragma once

#include <Eigen/Dense>

namespace resgas {

// Harvested reservoir states with aligned targets. Rows of V are timesteps;
// the first `washout` rows are excluded from fitting and loss evaluation.
struct StateTargetPair {
    Eigen::MatrixXd V;  // K x n
    Eigen::VectorXd y;  // K
    Eigen::Index washout = 0;

    void validate() const;
    Eigen::Index effective_rows() const { return V.rows() - washout; }
};

struct RidgeReadout {
    Eigen::VectorXd w_out;
    double mu = 0.0;
    bool has_bias = false;  // when true, the last weight multiplies a constant 1
};

// Closed-form ridge fit: solves (V'ᵀV' + mu I) w = V'ᵀ y' on the post-washout
// rows via a symmetric positive-definite solve. A singular system with mu == 0
// raises NumericalError pointing at mu > 0.
RidgeReadout ridge_fit(const StateTargetPair& data, double mu, bool add_bias = false);

// yhat(t) = row t of V dotted with w_out.
Eigen::VectorXd ridge_predict(const RidgeReadout& readout, const Eigen::MatrixXd& V);

// (1/2)|V w - y|^2 + (mu/2)|w|^2 over the post-washout rows.
double ridge_loss(const RidgeReadout& readout, const StateTargetPair& data);

}  // namespace resgas
