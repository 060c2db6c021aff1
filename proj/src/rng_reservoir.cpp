#include "resgas/rng_reservoir.hpp"

#include <algorithm>
#include <cmath>

#include "resgas/errors.hpp"
#include "resgas/neural_gas.hpp"
#include "resgas/random_source.hpp"

namespace resgas {

bool variant_is_masked(RngVariant v) {
    return v == RngVariant::MRngIr || v == RngVariant::MRngJ ||
           v == RngVariant::MRngIrm || v == RngVariant::MRngJm;
}

bool variant_is_joint(RngVariant v) {
    return v == RngVariant::RngJ || v == RngVariant::MRngJ || v == RngVariant::MRngJm;
}

bool variant_has_separate_masked_space(RngVariant v) {
    return v == RngVariant::MRngIrm || v == RngVariant::MRngJm;
}

std::string variant_name(RngVariant v) {
    switch (v) {
        case RngVariant::RngIr: return "rng-ir";
        case RngVariant::RngJ: return "rng-j";
        case RngVariant::MRngIr: return "m-rng-ir";
        case RngVariant::MRngJ: return "m-rng-j";
        case RngVariant::MRngIrm: return "m-rng-irm";
        case RngVariant::MRngJm: return "m-rng-jm";
    }
    throw DataError("variant_name: unknown variant");
}

RngVariant variant_from_name(const std::string& name) {
    if (name == "rng-ir") return RngVariant::RngIr;
    if (name == "rng-j") return RngVariant::RngJ;
    if (name == "m-rng-ir") return RngVariant::MRngIr;
    if (name == "m-rng-j") return RngVariant::MRngJ;
    if (name == "m-rng-irm") return RngVariant::MRngIrm;
    if (name == "m-rng-jm") return RngVariant::MRngJm;
    throw ConfigError("unknown RNG variant: " + name);
}

void RngParams::validate() const {
    if (alpha <= 0.0) throw DataError("RngParams: alpha must be > 0");
    if (beta <= 0.0) throw DataError("RngParams: beta must be > 0");
    if (beta_masked <= 0.0) throw DataError("RngParams: beta_masked must be > 0");
    if (gamma <= 0.0 || gamma > 1.0) throw DataError("RngParams: gamma in (0, 1]");
    if (eta < 0.0 || eta > 1.0) throw DataError("RngParams: eta in [0, 1]");
}

RngParams RngParams::normalized_for(RngVariant v) const {
    RngParams p = *this;
    if (!variant_is_masked(v)) p.eta = 0.0;
    // Shared rec space keeps one recurrent precision for all units.
    if (v == RngVariant::MRngIr || v == RngVariant::MRngJ) p.beta_masked = p.beta;
    p.validate();
    return p;
}

RngTrainConfig::RngTrainConfig(Schedule eps, Schedule lam, int n_passes)
    : epsilon(eps), lambda(lam), passes(n_passes) {
    if (epsilon.total_iters() != lambda.total_iters()) {
        throw DataError("RngTrainConfig: schedules must share T");
    }
    if (passes < 0) throw DataError("RngTrainConfig: passes must be >= 0");
}

RngReservoir::RngReservoir(Eigen::Index n, Eigen::Index d, const RngParams& params,
                           RngVariant variant, std::uint64_t seed) {
    if (n < 1) throw DataError("RngReservoir: n must be >= 1");
    if (d < 1) throw DataError("RngReservoir: d must be >= 1");
    params_ = params.normalized_for(variant);
    variant_ = variant;

    RandomSource rs(seed);
    w_in_.resize(n, d);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) w_in_(r, c) = rs.uniform(-1.0, 1.0);
    }
    // Recurrent references live where the states live.
    w_rec_.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) w_rec_(r, c) = rs.uniform();
    }

    // The permutation is drawn for every variant so that eta = 0 masked
    // variants consume the same random stream as their unmasked counterparts.
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    rs.shuffle(perm);

    const auto n_masked =
        static_cast<Eigen::Index>(std::llround(params_.eta * static_cast<double>(n)));
    if (n_masked >= n && n_masked > 0) {
        throw DataError("RngReservoir: at least one unmasked unit is required");
    }
    mask_.assign(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i < n_masked; ++i) {
        mask_[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = 1;
    }

    state_ = Eigen::VectorXd::Zero(n);
    rebuild_index_sets();
}

RngReservoir RngReservoir::from_parts(const RngParams& params, RngVariant variant,
                                      Eigen::MatrixXd w_in, Eigen::MatrixXd w_rec,
                                      std::vector<std::uint8_t> mask,
                                      Eigen::VectorXd state) {
    params.validate();
    const Eigen::Index n = w_in.rows();
    if (w_rec.rows() != n || w_rec.cols() != n ||
        static_cast<Eigen::Index>(mask.size()) != n || state.size() != n) {
        throw DataError("RngReservoir::from_parts: shape mismatch");
    }
    RngReservoir r;
    r.params_ = params;
    r.variant_ = variant;
    r.w_in_ = std::move(w_in);
    r.w_rec_ = std::move(w_rec);
    r.mask_ = std::move(mask);
    r.state_ = std::move(state);
    r.rebuild_index_sets();
    return r;
}

void RngReservoir::rebuild_index_sets() {
    masked_idx_.clear();
    unmasked_idx_.clear();
    all_idx_.clear();
    for (Eigen::Index i = 0; i < n(); ++i) {
        all_idx_.push_back(i);
        if (mask_[static_cast<std::size_t>(i)]) {
            masked_idx_.push_back(i);
        } else {
            unmasked_idx_.push_back(i);
        }
    }
}

Eigen::Index RngReservoir::masked_count() const {
    return static_cast<Eigen::Index>(masked_idx_.size());
}

const Eigen::VectorXd& RngReservoir::activate(const Eigen::VectorXd& x) {
    if (x.size() != d()) throw DataError("RngReservoir::activate: dimension mismatch");
    const Eigen::VectorXd din2 =
        (w_in_.rowwise() - x.transpose()).rowwise().squaredNorm();
    const Eigen::VectorXd drec2 =
        (w_rec_.rowwise() - state_.transpose()).rowwise().squaredNorm();
    const double g = params_.gamma;
    for (Eigen::Index i = 0; i < n(); ++i) {
        const double arg = mask_[static_cast<std::size_t>(i)]
                               ? -params_.beta_masked * drec2[i]
                               : -(params_.alpha * din2[i] + params_.beta * drec2[i]);
        state_[i] = (1.0 - g) * state_[i] + g * std::exp(arg);
    }
    return state_;
}

namespace {

// Ranks within a subset of units given full-size squared distances. Entries
// outside the subset stay -1.
std::vector<int> subset_ranks(const Eigen::VectorXd& sq_dists,
                              const std::vector<Eigen::Index>& subset) {
    Eigen::VectorXd gathered(static_cast<Eigen::Index>(subset.size()));
    for (std::size_t j = 0; j < subset.size(); ++j) {
        gathered[static_cast<Eigen::Index>(j)] = sq_dists[subset[j]];
    }
    const std::vector<int> local = ranks_from_sq_dists(gathered);
    std::vector<int> full(static_cast<std::size_t>(sq_dists.size()), -1);
    for (std::size_t j = 0; j < subset.size(); ++j) {
        full[static_cast<std::size_t>(subset[j])] = local[j];
    }
    return full;
}

}  // namespace

void RngReservoir::train_step(const Eigen::VectorXd& x, const Eigen::VectorXd& v_prev,
                              double epsilon, double lambda) {
    if (x.size() != d() || v_prev.size() != n()) {
        throw DataError("RngReservoir::train_step: dimension mismatch");
    }
    if (epsilon < 0.0) throw DataError("RngReservoir::train_step: epsilon must be >= 0");
    if (epsilon == 0.0) return;
    if (variant_is_joint(variant_)) {
        train_step_joint(x, v_prev, epsilon, lambda);
    } else {
        train_step_separate(x, v_prev, epsilon, lambda);
    }
}

void RngReservoir::train_step_separate(const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& v_prev, double epsilon,
                                       double lambda) {
    const Eigen::VectorXd din2 =
        (w_in_.rowwise() - x.transpose()).rowwise().squaredNorm();
    const Eigen::VectorXd drec2 =
        (w_rec_.rowwise() - v_prev.transpose()).rowwise().squaredNorm();

    // Input space: masked units have no meaningful input vector, so only
    // unmasked units are ranked and moved.
    {
        const std::vector<int> ks = subset_ranks(din2, unmasked_idx_);
        const double scale = epsilon * std::sqrt(params_.alpha);
        for (const Eigen::Index i : unmasked_idx_) {
            const double h = h_lambda(ks[static_cast<std::size_t>(i)], lambda);
            if (h == 0.0) continue;
            w_in_.row(i) += scale * h * (x.transpose() - w_in_.row(i));
        }
    }

    // Recurrent space. With a shared rec space (RNG-IR, M-RNG-IR) every unit
    // competes; with a separate masked space only the unmasked units do here.
    {
        const std::vector<Eigen::Index>& rec_set =
            variant_has_separate_masked_space(variant_) ? unmasked_idx_ : all_idx_;
        const std::vector<int> ks = subset_ranks(drec2, rec_set);
        const double scale = epsilon * std::sqrt(params_.beta);
        for (const Eigen::Index i : rec_set) {
            const double h = h_lambda(ks[static_cast<std::size_t>(i)], lambda);
            if (h == 0.0) continue;
            w_rec_.row(i) += scale * h * (v_prev.transpose() - w_rec_.row(i));
        }
    }

    if (variant_has_separate_masked_space(variant_) && !masked_idx_.empty()) {
        const std::vector<int> ks = subset_ranks(drec2, masked_idx_);
        const double scale = epsilon * std::sqrt(params_.beta_masked);
        for (const Eigen::Index i : masked_idx_) {
            const double h = h_lambda(ks[static_cast<std::size_t>(i)], lambda);
            if (h == 0.0) continue;
            w_rec_.row(i) += scale * h * (v_prev.transpose() - w_rec_.row(i));
        }
    }
}

void RngReservoir::train_step_joint(const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& v_prev, double epsilon,
                                    double lambda) {
    const Eigen::VectorXd din2 =
        (w_in_.rowwise() - x.transpose()).rowwise().squaredNorm();
    const Eigen::VectorXd drec2 =
        (w_rec_.rowwise() - v_prev.transpose()).rowwise().squaredNorm();

    if (variant_has_separate_masked_space(variant_)) {
        // M-RNG-JM: unmasked units rank and move in the joint space, masked
        // units in their own recurrent space.
        Eigen::VectorXd joint2(n());
        for (const Eigen::Index i : unmasked_idx_) {
            joint2[i] = params_.alpha * din2[i] + params_.beta * drec2[i];
        }
        const std::vector<int> ks = subset_ranks(joint2, unmasked_idx_);
        for (const Eigen::Index i : unmasked_idx_) {
            const double h = h_lambda(ks[static_cast<std::size_t>(i)], lambda);
            if (h == 0.0) continue;
            // The joint-space step on [sqrt(a) w_in; sqrt(b) w_rec] moves the
            // underlying vectors without the sqrt factors (they cancel).
            const double c = epsilon * h;
            w_in_.row(i) += c * (x.transpose() - w_in_.row(i));
            w_rec_.row(i) += c * (v_prev.transpose() - w_rec_.row(i));
        }
        if (!masked_idx_.empty()) {
            const std::vector<int> mks = subset_ranks(drec2, masked_idx_);
            const double scale = epsilon * std::sqrt(params_.beta_masked);
            for (const Eigen::Index i : masked_idx_) {
                const double h = h_lambda(mks[static_cast<std::size_t>(i)], lambda);
                if (h == 0.0) continue;
                w_rec_.row(i) += scale * h * (v_prev.transpose() - w_rec_.row(i));
            }
        }
        return;
    }

    // RNG-J / M-RNG-J: one ranking over all units. Masked units embed with an
    // absent input block, so their distance carries no input term and only
    // their recurrent block moves.
    Eigen::VectorXd joint2(n());
    for (Eigen::Index i = 0; i < n(); ++i) {
        joint2[i] = mask_[static_cast<std::size_t>(i)]
                        ? params_.beta * drec2[i]
                        : params_.alpha * din2[i] + params_.beta * drec2[i];
    }
    const std::vector<int> ks = subset_ranks(joint2, all_idx_);
    for (Eigen::Index i = 0; i < n(); ++i) {
        const double h = h_lambda(ks[static_cast<std::size_t>(i)], lambda);
        if (h == 0.0) continue;
        const double c = epsilon * h;
        if (!mask_[static_cast<std::size_t>(i)]) {
            w_in_.row(i) += c * (x.transpose() - w_in_.row(i));
        }
        w_rec_.row(i) += c * (v_prev.transpose() - w_rec_.row(i));
    }
}

void RngReservoir::pretrain(const Eigen::MatrixXd& inputs, const RngTrainConfig& cfg) {
    if (inputs.cols() != d()) throw DataError("RngReservoir::pretrain: dimension mismatch");
    if (inputs.rows() == 0) throw DataError("RngReservoir::pretrain: empty input sequence");
    const std::int64_t total =
        static_cast<std::int64_t>(cfg.passes) * static_cast<std::int64_t>(inputs.rows());
    if (cfg.epsilon.total_iters() != total) {
        throw DataError("RngReservoir::pretrain: schedule T must equal passes * length");
    }
    reset_state();
    Eigen::VectorXd v_prev(n());
    std::int64_t step = 0;
    for (int pass = 0; pass < cfg.passes; ++pass) {
        for (Eigen::Index t = 0; t < inputs.rows(); ++t, ++step) {
            v_prev = state_;
            const Eigen::VectorXd x = inputs.row(t).transpose();
            activate(x);
            train_step(x, v_prev, cfg.epsilon.value(step), cfg.lambda.value(step));
        }
    }
}

Eigen::MatrixXd RngReservoir::run(const Eigen::MatrixXd& inputs) {
    reset_state();
    return collect(inputs);
}

Eigen::MatrixXd RngReservoir::collect(const Eigen::MatrixXd& inputs) {
    if (inputs.cols() != d()) throw DataError("RngReservoir::run: dimension mismatch");
    Eigen::MatrixXd states(inputs.rows(), n());
    for (Eigen::Index t = 0; t < inputs.rows(); ++t) {
        states.row(t) = activate(inputs.row(t).transpose()).transpose();
    }
    return states;
}

void RngReservoir::feed(const Eigen::MatrixXd& inputs) {
    if (inputs.cols() != d()) throw DataError("RngReservoir::feed: dimension mismatch");
    for (Eigen::Index t = 0; t < inputs.rows(); ++t) {
        activate(inputs.row(t).transpose());
    }
}

Eigen::VectorXd joint_embed(const RngParams& params, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& v_prev) {
    Eigen::VectorXd s(x.size() + v_prev.size());
    s.head(x.size()) = std::sqrt(params.alpha) * x;
    s.tail(v_prev.size()) = std::sqrt(params.beta) * v_prev;
    return s;
}

Eigen::VectorXd joint_embed_unit(const RngReservoir& r, Eigen::Index i) {
    if (i < 0 || i >= r.n()) throw DataError("joint_embed_unit: index out of range");
    Eigen::VectorXd s(r.d() + r.n());
    s.head(r.d()) = std::sqrt(r.params().alpha) * r.w_in().row(i).transpose();
    s.tail(r.n()) = std::sqrt(r.params().beta) * r.w_rec().row(i).transpose();
    return s;
}

}  // namespace resgas
