#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace resgas {

struct EsnParams {
    Eigen::Index n = 100;
    Eigen::Index d = 1;
    double spectral_radius = 0.9;  // target r
    double sparsity = 0.0;         // fraction s of entries zeroed, in [0, 1)
    double gamma = 1.0;            // leak rate in (0, 1]
    double input_scaling = 1.0;

    void validate() const;
};

// Echo state reservoir: random [-0.5, 0.5] weights, recurrent matrix rescaled
// to the target spectral radius, then both matrices sparsified entrywise.
class EsnReservoir {
public:
    EsnReservoir(const EsnParams& params, std::uint64_t seed);

    const Eigen::VectorXd& activate(const Eigen::VectorXd& x);

    // Reset to zero state, feed the rows of inputs, return the K x n state
    // trajectory.
    Eigen::MatrixXd run(const Eigen::MatrixXd& inputs);

    // Like run but continues from the current state (used after a warm-up
    // feed).
    Eigen::MatrixXd collect(const Eigen::MatrixXd& inputs);

    // Feed rows without resetting or recording; used to warm the state.
    void feed(const Eigen::MatrixXd& inputs);

    void reset_state() { state_.setZero(); }

    const EsnParams& params() const { return params_; }
    const Eigen::MatrixXd& w_in() const { return w_in_; }
    const Eigen::MatrixXd& w_rec() const { return w_rec_; }
    const Eigen::VectorXd& state() const { return state_; }

    // Spectral radius measured after sparsification (equals the target when
    // sparsity == 0); recorded in run metadata.
    double measured_radius() const { return measured_radius_; }
    // Number of degenerate (rho == 0) draws that forced a redraw.
    int redraw_count() const { return redraw_count_; }

    // Snapshot loading hook: rebuilds a reservoir from raw matrices.
    static EsnReservoir from_parts(const EsnParams& params, Eigen::MatrixXd w_in,
                                   Eigen::MatrixXd w_rec, Eigen::VectorXd state);

private:
    EsnReservoir() = default;

    EsnParams params_;
    Eigen::MatrixXd w_in_;   // n x d
    Eigen::MatrixXd w_rec_;  // n x n
    Eigen::VectorXd state_;  // n
    Eigen::VectorXd scratch_;
    double measured_radius_ = 0.0;
    int redraw_count_ = 0;
};

}  // namespace resgas
