#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "resgas/datasets.hpp"
#include "resgas/esn_reservoir.hpp"
#include "resgas/rng_reservoir.hpp"

namespace resgas {

// Root mean square error over post-washout entries, normalized by the
// population variance of the post-washout true values.
double nrmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual,
             Eigen::Index washout);

struct DatasetSpec {
    std::string name = "narma";  // "narma" | "mackey-glass" | "lorenz"
    NarmaParams narma;
    MackeyGlassParams mackey_glass;
    LorenzParams lorenz;
    int t_h = 1;  // horizon for mackey-glass / lorenz
    Eigen::Index train_len = 10000;
    Eigen::Index test_len = 2000;

    Eigen::Index input_dim() const;
    bool seed_dependent() const { return name == "narma"; }
    // Full-length labeled sequence (train + test span).
    LabeledSequence generate(std::uint64_t seed) const;
    void validate() const;
};

struct ModelSpec {
    std::string kind = "esn";  // "esn" or an RNG variant name
    RngParams rng;
    double esn_spectral_radius = 0.9;
    double esn_sparsity = 0.0;
    double esn_gamma = 1.0;
    double esn_input_scaling = 1.0;
    double mu = 1e-6;  // ridge regularization
    bool readout_bias = false;

    bool is_esn() const { return kind == "esn"; }
    RngVariant variant() const { return variant_from_name(kind); }
    void validate() const;
};

struct PretrainSpec {
    double epsilon_i = 0.5;
    double epsilon_f = 0.005;
    double lambda_i = 50.0;
    double lambda_f = 0.01;
    int passes = 1;

    RngTrainConfig config_for(Eigen::Index sequence_len) const;
};

struct GridSpec {
    // Axis name -> candidate values. Names: alpha, beta, beta_masked, gamma,
    // eta, mu (RNG); r, s, gamma, input_scaling, mu (ESN).
    std::vector<std::pair<std::string, std::vector<double>>> axes;

    bool empty() const { return axes.empty(); }
    std::size_t point_count() const;
};

struct ExperimentSpec {
    DatasetSpec dataset;
    ModelSpec model;
    Eigen::Index n = 100;
    Eigen::Index washout = 100;
    std::uint64_t seed_base = 1;
    int seed_count = 50;
    PretrainSpec pretrain;
    GridSpec grid;
    int grid_seed_count = 5;
    Eigen::Index grid_val_len = 2000;
    // Training-tail inputs replayed after the zero reset to warm the state
    // before the test span.
    Eigen::Index warm_len = 100;
    bool washout_in_fit = true;

    void validate() const;
    nlohmann::json to_json() const;
};

struct RunResult {
    std::vector<std::uint64_t> seeds;
    std::vector<double> nrmse_per_seed;  // aligned with seeds; NaN on failure
    double mean = 0.0;
    double variance = 0.0;  // population variance over successful seeds
    std::string best_grid_point;
    nlohmann::json metadata;
};

// Executes the spec over all seeds (in parallel), aggregates NRMSE.
// Per-seed failures are recorded in metadata and skipped unless every seed
// fails. Ignores spec.grid.
RunResult run_experiment(const ExperimentSpec& spec);

// The data exactly as one seeded run sees it: generated, split, rescaled.
std::pair<LabeledSequence, LabeledSequence> prepare_splits(const ExperimentSpec& spec,
                                                           std::uint64_t seed);

// Reservoirs exactly as one seeded run builds them (RNG includes the
// pre-training pass); used for snapshot emission and inspection.
EsnReservoir build_esn(const ExperimentSpec& spec, std::uint64_t seed,
                       const LabeledSequence& train);
RngReservoir build_rng(const ExperimentSpec& spec, std::uint64_t seed,
                       const LabeledSequence& train);

struct GridPointScore {
    std::string point;
    double validation_nrmse = 0.0;  // +inf when the point failed validation
};

struct GridSearchResult {
    std::string best_point;
    std::vector<GridPointScore> scores;
    RunResult result;  // winner refit on the full protocol
};

// Ranks every grid point by mean validation NRMSE (holdout tail of the train
// span, reduced seed set), then reruns the winner with the full protocol.
GridSearchResult grid_search(const ExperimentSpec& spec);

struct SweepRow {
    std::string dataset;
    std::string variant;
    Eigen::Index n = 0;
    int t_h = 0;
    double lambda_i = 0.0;
    double lambda_f = 0.0;
    int seed_count = 0;
    double nrmse_mean = 0.0;
    double nrmse_var = 0.0;
    std::string best_grid_point;
};

SweepRow row_from_result(const ExperimentSpec& spec, const RunResult& result);

std::vector<SweepRow> sweep_units(const ExperimentSpec& spec,
                                  const std::vector<Eigen::Index>& n_values);
std::vector<SweepRow> sweep_horizon(const ExperimentSpec& spec,
                                    const std::vector<int>& t_h_values);
// Each regime is a (lambda_i, lambda_f) pair for the pre-training schedule.
std::vector<SweepRow> sweep_lambda(
    const ExperimentSpec& spec,
    const std::vector<std::pair<double, double>>& regimes);

}  // namespace resgas
