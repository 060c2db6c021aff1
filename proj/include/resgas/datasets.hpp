#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Dense>
#include <json.hpp>

namespace resgas {

// Time-indexed inputs X (K x d) and targets y (K), plus generator metadata
// (parameters, seed, rescaling coefficients).
struct LabeledSequence {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    nlohmann::json meta;

    Eigen::Index length() const { return X.rows(); }
    Eigen::Index dim() const { return X.cols(); }
};

struct NarmaParams {
    int order = 10;
    double alpha = 0.3;
    double beta = 0.05;
    double gamma = 1.5;
    double delta = 0.1;

    void validate() const;
};

// Targets for a given input sequence (zero initial history). Throws
// NumericalError if |y| exceeds 10 (divergent draw).
Eigen::VectorXd narma_targets(const Eigen::VectorXd& x, const NarmaParams& p);

// Inputs drawn uniformly from [0, 0.5]; on divergence the draw is retried
// under the next derived seed and the event recorded in meta.
LabeledSequence gen_narma(const NarmaParams& p, Eigen::Index length, std::uint64_t seed);

struct MackeyGlassParams {
    double a = 0.2;
    double b = 0.1;
    double tau = 17.0;
    double dt = 0.005;
    double sample_every = 1.0;  // time units between samples
    int t_h = 1;                // prediction horizon in samples
    double warmup = 1000.0;     // discarded leading time units
    double x0 = 1.2;            // constant initial history

    void validate() const;
    bool chaotic_regime() const { return tau > 16.8; }
};

// Raw sampled series (used by convergence checks): count samples after warmup.
Eigen::VectorXd mackey_glass_series(const MackeyGlassParams& p, Eigen::Index count);

// x(t) -> x(t + t_h), d = 1.
LabeledSequence gen_mackey_glass(const MackeyGlassParams& p, Eigen::Index length);

struct LorenzParams {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
    double dt = 0.005;
    double sample_every = 0.02;
    int t_h = 1;
    double warmup = 10.0;
    double x0 = 1.0, y0 = 1.0, z0 = 1.0;

    void validate() const;
};

// Raw sampled trajectory (K x 3) after warmup.
Eigen::MatrixXd lorenz_series(const LorenzParams& p, Eigen::Index count);

// (x1, x2, x3)(t) -> sigma * (x2 - x1) evaluated at sample t + t_h, d = 3.
LabeledSequence gen_lorenz(const LorenzParams& p, Eigen::Index length);

// Contiguous prefix/suffix split preserving temporal order.
std::pair<LabeledSequence, LabeledSequence> split(const LabeledSequence& seq,
                                                  Eigen::Index train_len,
                                                  Eigen::Index test_len);

// Affine per-column map to [-1, 1] computed over the concatenated train+test
// span and applied to both splits; coefficients recorded in meta. Constant
// columns map to 0 and are flagged.
std::pair<LabeledSequence, LabeledSequence> rescale_sequences(LabeledSequence train,
                                                              LabeledSequence test);

}  // namespace resgas
