#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "resgas/schedule.hpp"

namespace resgas {

// The six recursive-neural-gas training variants. IR trains input and
// recurrent reference vectors in separate spaces, J in the joint space;
// the M_ prefix adds masked units, and the trailing M trains masked units
// in their own vector space.
enum class RngVariant {
    RngIr,
    RngJ,
    MRngIr,
    MRngJ,
    MRngIrm,
    MRngJm,
};

bool variant_is_masked(RngVariant v);
bool variant_is_joint(RngVariant v);
// True for the *_IRM / *_JM variants whose masked units train separately.
bool variant_has_separate_masked_space(RngVariant v);

std::string variant_name(RngVariant v);
RngVariant variant_from_name(const std::string& name);

struct RngParams {
    double alpha = 1.0;        // input RBF precision
    double beta = 1.0;         // recurrent RBF precision
    double beta_masked = 1.0;  // recurrent precision of masked units
    double gamma = 1.0;        // leak rate in (0, 1]
    double eta = 0.0;          // masked fraction in [0, 1]

    void validate() const;
    // Unmasked variants force eta = 0; shared-rec-space masked variants force
    // beta_masked = beta.
    RngParams normalized_for(RngVariant v) const;
};

struct RngTrainConfig {
    Schedule epsilon;
    Schedule lambda;
    int passes = 1;

    RngTrainConfig(Schedule eps, Schedule lam, int n_passes = 1);
};

// Recursive neural gas reservoir: per-unit input/recurrent reference vectors,
// RBF transfer with leaky integration, masked units driven by recurrent state
// alone, and unsupervised pre-training in the variant's vector space(s).
class RngReservoir {
public:
    RngReservoir(Eigen::Index n, Eigen::Index d, const RngParams& params,
                 RngVariant variant, std::uint64_t seed);

    static RngReservoir from_parts(const RngParams& params, RngVariant variant,
                                   Eigen::MatrixXd w_in, Eigen::MatrixXd w_rec,
                                   std::vector<std::uint8_t> mask,
                                   Eigen::VectorXd state);

    // One transfer-function step; updates and returns the state.
    const Eigen::VectorXd& activate(const Eigen::VectorXd& x);

    // One unsupervised update of the reference vectors for the sample pair
    // (x(t), v(t-1)), dispatched on the variant.
    void train_step(const Eigen::VectorXd& x, const Eigen::VectorXd& v_prev,
                    double epsilon, double lambda);

    // Activate/train over the input rows; schedules run over
    // passes * inputs.rows() steps. State is zeroed first.
    void pretrain(const Eigen::MatrixXd& inputs, const RngTrainConfig& cfg);

    // Reset to zero state, feed rows, return K x n states. Vectors frozen.
    Eigen::MatrixXd run(const Eigen::MatrixXd& inputs);

    // Like run but continues from the current state.
    Eigen::MatrixXd collect(const Eigen::MatrixXd& inputs);

    // Feed rows without recording states (state warm-up).
    void feed(const Eigen::MatrixXd& inputs);

    void reset_state() { state_.setZero(); }

    Eigen::Index n() const { return w_in_.rows(); }
    Eigen::Index d() const { return w_in_.cols(); }
    const RngParams& params() const { return params_; }
    RngVariant variant() const { return variant_; }
    const Eigen::MatrixXd& w_in() const { return w_in_; }
    const Eigen::MatrixXd& w_rec() const { return w_rec_; }
    const Eigen::VectorXd& state() const { return state_; }
    const std::vector<std::uint8_t>& mask() const { return mask_; }
    Eigen::Index masked_count() const;

private:
    RngReservoir() = default;
    void rebuild_index_sets();
    void train_step_separate(const Eigen::VectorXd& x, const Eigen::VectorXd& v_prev,
                             double epsilon, double lambda);
    void train_step_joint(const Eigen::VectorXd& x, const Eigen::VectorXd& v_prev,
                          double epsilon, double lambda);

    RngParams params_;
    RngVariant variant_ = RngVariant::RngIr;
    Eigen::MatrixXd w_in_;            // n x d
    Eigen::MatrixXd w_rec_;           // n x n
    Eigen::VectorXd state_;           // n, components in [0, 1]
    std::vector<std::uint8_t> mask_;  // 1 = masked from input
    std::vector<Eigen::Index> masked_idx_;
    std::vector<Eigen::Index> unmasked_idx_;
    std::vector<Eigen::Index> all_idx_;
};

// Signal embedding in the joint vector space: [sqrt(alpha) x; sqrt(beta) v].
Eigen::VectorXd joint_embed(const RngParams& params, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& v_prev);

// Unit embedding [sqrt(alpha) w_in_i; sqrt(beta) w_rec_i].
Eigen::VectorXd joint_embed_unit(const RngReservoir& r, Eigen::Index i);

}  // namespace resgas
