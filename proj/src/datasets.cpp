#include "resgas/datasets.hpp"

#include <cmath>
#include <vector>

#include "resgas/errors.hpp"
#include "resgas/random_source.hpp"

namespace resgas {

void NarmaParams::validate() const {
    if (order < 1) throw DataError("NarmaParams: order must be >= 1");
}

Eigen::VectorXd narma_targets(const Eigen::VectorXd& x, const NarmaParams& p) {
    p.validate();
    const Eigen::Index k = x.size();
    if (k <= p.order) throw DataError("narma_targets: length must exceed the order");

    Eigen::VectorXd y = Eigen::VectorXd::Zero(k);
    for (Eigen::Index t = p.order; t < k; ++t) {
        double lag_sum = 0.0;
        for (int i = 1; i <= p.order; ++i) lag_sum += y[t - i];
        y[t] = p.alpha * y[t - 1] + p.beta * y[t - 1] * lag_sum +
               p.gamma * x[t - p.order] * x[t - 1] + p.delta;
        if (std::abs(y[t]) > 10.0) {
            throw NumericalError("narma_targets: sequence diverged");
        }
    }
    return y;
}

LabeledSequence gen_narma(const NarmaParams& p, Eigen::Index length, std::uint64_t seed) {
    p.validate();
    if (length <= p.order) throw DataError("gen_narma: length must exceed the order");

    std::uint64_t draw_seed = seed;
    int regenerations = 0;
    for (;;) {
        RandomSource rs(draw_seed);
        Eigen::VectorXd x(length);
        for (Eigen::Index t = 0; t < length; ++t) x[t] = rs.uniform(0.0, 0.5);
        try {
            LabeledSequence seq;
            seq.y = narma_targets(x, p);
            seq.X = x;
            seq.meta = {{"generator", "narma"},
                        {"order", p.order},
                        {"alpha", p.alpha},
                        {"beta", p.beta},
                        {"gamma", p.gamma},
                        {"delta", p.delta},
                        {"seed", seed},
                        {"effective_seed", draw_seed},
                        {"regenerations", regenerations}};
            return seq;
        } catch (const NumericalError&) {
            ++regenerations;
            if (regenerations > 32) {
                throw NumericalError("gen_narma: persistent divergence across reseeds");
            }
            draw_seed = derive_seed(draw_seed, 0x6e61726d);  // "narm"
        }
    }
}

void MackeyGlassParams::validate() const {
    if (dt <= 0.0) throw DataError("MackeyGlassParams: dt must be > 0");
    if (tau < 2.0 * dt) throw DataError("MackeyGlassParams: tau must be >= 2*dt");
    if (sample_every <= 0.0) throw DataError("MackeyGlassParams: sample_every must be > 0");
    const double per = sample_every / dt;
    if (std::abs(per - std::llround(per)) > 1e-9 * per) {
        throw DataError("MackeyGlassParams: dt must divide the sampling stride");
    }
    if (t_h < 0) throw DataError("MackeyGlassParams: t_h must be >= 0");
    if (warmup < 0.0) throw DataError("MackeyGlassParams: warmup must be >= 0");
}

namespace {

// RK4 with the delayed term read from the filled grid through linear
// interpolation; times at or before zero use the constant history.
class DelayIntegrator {
public:
    DelayIntegrator(const MackeyGlassParams& p, std::size_t steps)
        : p_(p), delay_steps_(p.tau / p.dt), xs_(steps + 1) {
        xs_[0] = p.x0;
    }

    double delayed(double step_index) const {
        const double t = step_index - delay_steps_;
        if (t <= 0.0) return p_.x0;
        const auto i = static_cast<std::size_t>(t);
        const double frac = t - static_cast<double>(i);
        return xs_[i] * (1.0 - frac) + xs_[i + 1] * frac;
    }

    double deriv(double x, double xd) const {
        const double pow10 = std::pow(xd, 10);
        return p_.a * xd / (1.0 + pow10) - p_.b * x;
    }

    void integrate() {
        const double dt = p_.dt;
        for (std::size_t k = 0; k + 1 < xs_.size(); ++k) {
            const double x = xs_[k];
            const double fk = static_cast<double>(k);
            const double k1 = deriv(x, delayed(fk));
            const double k2 = deriv(x + 0.5 * dt * k1, delayed(fk + 0.5));
            const double k3 = deriv(x + 0.5 * dt * k2, delayed(fk + 0.5));
            const double k4 = deriv(x + dt * k3, delayed(fk + 1.0));
            xs_[k + 1] = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }

    const std::vector<double>& grid() const { return xs_; }

private:
    MackeyGlassParams p_;
    double delay_steps_;
    std::vector<double> xs_;
};

}  // namespace

Eigen::VectorXd mackey_glass_series(const MackeyGlassParams& p, Eigen::Index count) {
    p.validate();
    if (count < 1) throw DataError("mackey_glass_series: count must be >= 1");
    const auto per = static_cast<std::size_t>(std::llround(p.sample_every / p.dt));
    const auto warmup_steps = static_cast<std::size_t>(std::llround(p.warmup / p.dt));
    const std::size_t total_steps =
        warmup_steps + static_cast<std::size_t>(count - 1) * per;

    DelayIntegrator integ(p, total_steps);
    integ.integrate();

    Eigen::VectorXd samples(count);
    for (Eigen::Index j = 0; j < count; ++j) {
        samples[j] = integ.grid()[warmup_steps + static_cast<std::size_t>(j) * per];
    }
    return samples;
}

LabeledSequence gen_mackey_glass(const MackeyGlassParams& p, Eigen::Index length) {
    p.validate();
    if (length < 1) throw DataError("gen_mackey_glass: length must be >= 1");
    const Eigen::VectorXd samples = mackey_glass_series(p, length + p.t_h);

    LabeledSequence seq;
    seq.X = samples.head(length);
    seq.y = samples.segment(p.t_h, length);
    seq.meta = {{"generator", "mackey-glass"},
                {"a", p.a},
                {"b", p.b},
                {"tau", p.tau},
                {"dt", p.dt},
                {"sample_every", p.sample_every},
                {"t_h", p.t_h},
                {"warmup", p.warmup},
                {"x0", p.x0},
                {"chaotic_regime", p.chaotic_regime()}};
    return seq;
}

void LorenzParams::validate() const {
    if (dt <= 0.0) throw DataError("LorenzParams: dt must be > 0");
    if (sample_every <= 0.0) throw DataError("LorenzParams: sample_every must be > 0");
    const double per = sample_every / dt;
    if (std::abs(per - std::llround(per)) > 1e-9 * per) {
        throw DataError("LorenzParams: dt must divide the sampling stride");
    }
    if (t_h < 0) throw DataError("LorenzParams: t_h must be >= 0");
    if (warmup < 0.0) throw DataError("LorenzParams: warmup must be >= 0");
}

Eigen::MatrixXd lorenz_series(const LorenzParams& p, Eigen::Index count) {
    p.validate();
    if (count < 1) throw DataError("lorenz_series: count must be >= 1");
    const auto per = static_cast<std::size_t>(std::llround(p.sample_every / p.dt));
    const auto warmup_steps = static_cast<std::size_t>(std::llround(p.warmup / p.dt));
    const std::size_t total_steps =
        warmup_steps + static_cast<std::size_t>(count - 1) * per;

    auto f = [&p](const Eigen::Vector3d& s) {
        return Eigen::Vector3d(p.sigma * (s[1] - s[0]),
                               s[0] * (p.rho - s[2]) - s[1],
                               s[0] * s[1] - p.beta * s[2]);
    };

    Eigen::MatrixXd samples(count, 3);
    Eigen::Vector3d s(p.x0, p.y0, p.z0);
    std::size_t next_sample = warmup_steps;
    Eigen::Index row = 0;
    if (next_sample == 0) {
        samples.row(row++) = s.transpose();
        next_sample += per;
    }
    const double dt = p.dt;
    for (std::size_t k = 1; k <= total_steps; ++k) {
        const Eigen::Vector3d k1 = f(s);
        const Eigen::Vector3d k2 = f(s + 0.5 * dt * k1);
        const Eigen::Vector3d k3 = f(s + 0.5 * dt * k2);
        const Eigen::Vector3d k4 = f(s + dt * k3);
        s += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (k == next_sample && row < count) {
            samples.row(row++) = s.transpose();
            next_sample += per;
        }
    }
    if (row != count) throw NumericalError("lorenz_series: sampling bookkeeping failed");
    return samples;
}

LabeledSequence gen_lorenz(const LorenzParams& p, Eigen::Index length) {
    p.validate();
    if (length < 1) throw DataError("gen_lorenz: length must be >= 1");
    const Eigen::MatrixXd samples = lorenz_series(p, length + p.t_h);

    LabeledSequence seq;
    seq.X = samples.topRows(length);
    seq.y.resize(length);
    for (Eigen::Index t = 0; t < length; ++t) {
        const Eigen::Index ahead = t + p.t_h;
        seq.y[t] = p.sigma * (samples(ahead, 1) - samples(ahead, 0));
    }
    seq.meta = {{"generator", "lorenz"},
                {"sigma", p.sigma},
                {"rho", p.rho},
                {"beta", p.beta},
                {"dt", p.dt},
                {"sample_every", p.sample_every},
                {"t_h", p.t_h},
                {"warmup", p.warmup}};
    return seq;
}

std::pair<LabeledSequence, LabeledSequence> split(const LabeledSequence& seq,
                                                  Eigen::Index train_len,
                                                  Eigen::Index test_len) {
    if (train_len < 1 || test_len < 1) throw DataError("split: lengths must be >= 1");
    if (seq.length() < train_len + test_len) {
        throw DataError("split: sequence shorter than train_len + test_len");
    }
    LabeledSequence train;
    train.X = seq.X.topRows(train_len);
    train.y = seq.y.head(train_len);
    train.meta = seq.meta;
    train.meta["split"] = "train";

    LabeledSequence test;
    test.X = seq.X.middleRows(train_len, test_len);
    test.y = seq.y.segment(train_len, test_len);
    test.meta = seq.meta;
    test.meta["split"] = "test";
    return {std::move(train), std::move(test)};
}

namespace {

struct AffineMap {
    double scale = 0.0;
    double offset = 0.0;
    bool constant = false;
};

AffineMap map_to_unit_interval(double lo, double hi) {
    AffineMap m;
    if (hi <= lo) {
        m.constant = true;  // zero range, mapped to 0
        return m;
    }
    m.scale = 2.0 / (hi - lo);
    m.offset = -1.0 - m.scale * lo;
    return m;
}

}  // namespace

std::pair<LabeledSequence, LabeledSequence> rescale_sequences(LabeledSequence train,
                                                              LabeledSequence test) {
    if (train.length() == 0 || test.length() == 0) {
        throw DataError("rescale_sequences: empty split");
    }
    if (train.dim() != test.dim()) {
        throw DataError("rescale_sequences: dimension mismatch between splits");
    }

    nlohmann::json rescale;
    rescale["x_scale"] = nlohmann::json::array();
    rescale["x_offset"] = nlohmann::json::array();
    rescale["constant_columns"] = nlohmann::json::array();

    for (Eigen::Index j = 0; j < train.dim(); ++j) {
        const double lo = std::min(train.X.col(j).minCoeff(), test.X.col(j).minCoeff());
        const double hi = std::max(train.X.col(j).maxCoeff(), test.X.col(j).maxCoeff());
        const AffineMap m = map_to_unit_interval(lo, hi);
        if (m.constant) rescale["constant_columns"].push_back(j);
        train.X.col(j) = (m.scale * train.X.col(j)).array() + m.offset;
        test.X.col(j) = (m.scale * test.X.col(j)).array() + m.offset;
        rescale["x_scale"].push_back(m.scale);
        rescale["x_offset"].push_back(m.offset);
    }

    const double ylo = std::min(train.y.minCoeff(), test.y.minCoeff());
    const double yhi = std::max(train.y.maxCoeff(), test.y.maxCoeff());
    const AffineMap ym = map_to_unit_interval(ylo, yhi);
    if (ym.constant) rescale["constant_columns"].push_back("y");
    train.y = (ym.scale * train.y).array() + ym.offset;
    test.y = (ym.scale * test.y).array() + ym.offset;
    rescale["y_scale"] = ym.scale;
    rescale["y_offset"] = ym.offset;

    train.meta["rescale"] = rescale;
    test.meta["rescale"] = rescale;
    return {std::move(train), std::move(test)};
}

}  // namespace resgas
