#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "resgas/random_source.hpp"
#include "resgas/schedule.hpp"

namespace resgas {

// Codebook of a plain (non-recursive) neural gas: one reference vector per row.
struct GasUnits {
    Eigen::MatrixXd vectors;  // n x d

    Eigen::Index n() const { return vectors.rows(); }
    Eigen::Index d() const { return vectors.cols(); }
};

struct NgTrainConfig {
    Schedule epsilon;
    Schedule lambda;

    NgTrainConfig(Schedule eps, Schedule lam);
    std::int64_t total_iters() const { return epsilon.total_iters(); }
};

// Rank-based neighborhood weight: delta_{0k} for lambda == 0, exp(-k/lambda)
// otherwise.
double h_lambda(int k, double lambda);

// k[i] = number of units strictly closer to x than unit i. Tied distances
// share a rank.
std::vector<int> rank(const GasUnits& units, const Eigen::VectorXd& x);

// Same, from precomputed squared distances.
std::vector<int> ranks_from_sq_dists(const Eigen::VectorXd& sq_dists);

// Single stochastic update: w_i += epsilon * h_lambda(k_i(x)) * (x - w_i).
void ng_update_step(GasUnits& units, const Eigen::VectorXd& x, double epsilon,
                    double lambda);

using Sampler = std::function<Eigen::VectorXd(RandomSource&)>;

// Runs cfg.total_iters() update steps with scheduled epsilon(t), lambda(t),
// drawing one sample per step. Deterministic given seed.
void ng_train(GasUnits& units, const Sampler& sampler, const NgTrainConfig& cfg,
              std::uint64_t seed);

// Empirical neighborhood-weighted quantization energy over a finite sample
// (rows = points): (1 / 2C) * mean_x sum_i h_lambda(k_i(x)) |x - w_i|^2 with
// C = sum_{i=0}^{n-1} h_lambda(i).
double ng_energy(const GasUnits& units, const Eigen::MatrixXd& sample, double lambda);

// 2-D annulus used by the coverage demo.
struct RingDataset {
    double inner_radius = 0.7;
    double outer_radius = 1.0;
    Eigen::Vector2d center = Eigen::Vector2d::Zero();

    bool contains(const Eigen::Vector2d& p) const;
    // Uniform over the annulus area.
    Eigen::Vector2d sample(RandomSource& rs) const;
    void validate() const;
};

// Fraction of units whose vector lies inside the ring support. Requires d == 2.
double ring_coverage(const GasUnits& units, const RingDataset& ring);

// Units placed uniformly at random over the disc of radius ring.outer_radius.
GasUnits init_units_on_disc(int n, const RingDataset& ring, RandomSource& rs);

struct RingDemoRow {
    std::int64_t iteration;
    double coverage;
    double energy;
};

// Trains n_units on the ring and records (iteration, coverage, energy) at
// evenly spaced checkpoints (energy on a held-out 1000-point sample).
std::vector<RingDemoRow> ring_demo(const RingDataset& ring, int n_units,
                                   const NgTrainConfig& cfg, std::uint64_t seed,
                                   int checkpoints = 20);

}  // namespace resgas
