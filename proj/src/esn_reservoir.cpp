#include "resgas/esn_reservoir.hpp"

#include <cmath>

#include "resgas/errors.hpp"
#include "resgas/random_source.hpp"
#include "resgas/spectral.hpp"

namespace resgas {

void EsnParams::validate() const {
    if (n < 1) throw DataError("EsnParams: n must be >= 1");
    if (d < 1) throw DataError("EsnParams: d must be >= 1");
    if (spectral_radius <= 0.0) throw DataError("EsnParams: spectral radius must be > 0");
    if (sparsity < 0.0 || sparsity >= 1.0) throw DataError("EsnParams: sparsity in [0, 1)");
    if (gamma <= 0.0 || gamma > 1.0) throw DataError("EsnParams: gamma in (0, 1]");
    if (input_scaling <= 0.0) throw DataError("EsnParams: input_scaling must be > 0");
}

namespace {

void fill_uniform(Eigen::MatrixXd& m, RandomSource& rs, double lo, double hi) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m(r, c) = rs.uniform(lo, hi);
        }
    }
}

void sparsify(Eigen::MatrixXd& m, RandomSource& rs, double s) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (rs.uniform() < s) m(r, c) = 0.0;
        }
    }
}

}  // namespace

EsnReservoir::EsnReservoir(const EsnParams& params, std::uint64_t seed) {
    params.validate();
    params_ = params;
    const Eigen::Index n = params.n;
    const Eigen::Index d = params.d;

    w_in_.resize(n, d);
    w_rec_.resize(n, n);

    double rho = 0.0;
    std::uint64_t draw_seed = seed;
    for (;;) {
        RandomSource rs(draw_seed);
        fill_uniform(w_in_, rs, -0.5, 0.5);
        fill_uniform(w_rec_, rs, -0.5, 0.5);
        rho = spectral_radius(w_rec_);
        if (rho > 0.0) break;
        // Degenerate draw; move to the next seed stream.
        ++redraw_count_;
        draw_seed = derive_seed(draw_seed, 0x72656472);  // "redr"
        if (redraw_count_ > 16) {
            throw NumericalError("EsnReservoir: repeated degenerate weight draws");
        }
    }

    w_rec_ *= params.spectral_radius / rho;

    if (params.sparsity > 0.0) {
        RandomSource rs(derive_seed(draw_seed, 0x73706172));  // "spar"
        sparsify(w_in_, rs, params.sparsity);
        sparsify(w_rec_, rs, params.sparsity);
        measured_radius_ = spectral_radius(w_rec_);
    } else {
        measured_radius_ = params.spectral_radius;
    }

    w_in_ *= params.input_scaling;
    state_ = Eigen::VectorXd::Zero(n);
    scratch_.resize(n);
}

EsnReservoir EsnReservoir::from_parts(const EsnParams& params, Eigen::MatrixXd w_in,
                                      Eigen::MatrixXd w_rec, Eigen::VectorXd state) {
    params.validate();
    if (w_in.rows() != params.n || w_in.cols() != params.d ||
        w_rec.rows() != params.n || w_rec.cols() != params.n ||
        state.size() != params.n) {
        throw DataError("EsnReservoir::from_parts: shape mismatch");
    }
    EsnReservoir r;
    r.params_ = params;
    r.w_in_ = std::move(w_in);
    r.w_rec_ = std::move(w_rec);
    r.state_ = std::move(state);
    r.scratch_.resize(params.n);
    r.measured_radius_ = spectral_radius(r.w_rec_);
    return r;
}

const Eigen::VectorXd& EsnReservoir::activate(const Eigen::VectorXd& x) {
    if (x.size() != params_.d) throw DataError("EsnReservoir::activate: dimension mismatch");
    scratch_.noalias() = w_in_ * x;
    scratch_.noalias() += w_rec_ * state_;
    state_ = (1.0 - params_.gamma) * state_ +
             params_.gamma * scratch_.array().tanh().matrix();
    return state_;
}

Eigen::MatrixXd EsnReservoir::run(const Eigen::MatrixXd& inputs) {
    reset_state();
    return collect(inputs);
}

Eigen::MatrixXd EsnReservoir::collect(const Eigen::MatrixXd& inputs) {
    if (inputs.cols() != params_.d) throw DataError("EsnReservoir::run: dimension mismatch");
    Eigen::MatrixXd states(inputs.rows(), params_.n);
    for (Eigen::Index t = 0; t < inputs.rows(); ++t) {
        states.row(t) = activate(inputs.row(t).transpose()).transpose();
    }
    return states;
}

void EsnReservoir::feed(const Eigen::MatrixXd& inputs) {
    if (inputs.cols() != params_.d) throw DataError("EsnReservoir::feed: dimension mismatch");
    for (Eigen::Index t = 0; t < inputs.rows(); ++t) {
        activate(inputs.row(t).transpose());
    }
}

}  // namespace resgas
