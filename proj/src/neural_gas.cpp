#include "resgas/neural_gas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "resgas/errors.hpp"

namespace resgas {

NgTrainConfig::NgTrainConfig(Schedule eps, Schedule lam)
    : epsilon(eps), lambda(lam) {
    if (epsilon.total_iters() != lambda.total_iters()) {
        throw DataError("NgTrainConfig: epsilon and lambda schedules must share T");
    }
}

double h_lambda(int k, double lambda) {
    if (k < 0) throw DataError("h_lambda: rank must be >= 0");
    if (lambda < 0.0) throw DataError("h_lambda: lambda must be >= 0");
    if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(-static_cast<double>(k) / lambda);
}

std::vector<int> ranks_from_sq_dists(const Eigen::VectorXd& sq_dists) {
    const auto n = static_cast<std::size_t>(sq_dists.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return sq_dists[a] < sq_dists[b]; });

    // Tied distances get the count of strictly closer units, i.e. the start
    // index of their equality group.
    std::vector<int> ranks(n);
    std::size_t group_start = 0;
    for (std::size_t pos = 0; pos < n; ++pos) {
        if (pos > 0 && sq_dists[order[pos]] != sq_dists[order[pos - 1]]) {
            group_start = pos;
        }
        ranks[static_cast<std::size_t>(order[pos])] = static_cast<int>(group_start);
    }
    return ranks;
}

std::vector<int> rank(const GasUnits& units, const Eigen::VectorXd& x) {
    if (x.size() != units.d()) throw DataError("rank: dimension mismatch");
    const Eigen::VectorXd d2 =
        (units.vectors.rowwise() - x.transpose()).rowwise().squaredNorm();
    return ranks_from_sq_dists(d2);
}

void ng_update_step(GasUnits& units, const Eigen::VectorXd& x, double epsilon,
                    double lambda) {
    if (x.size() != units.d()) throw DataError("ng_update_step: dimension mismatch");
    if (epsilon <= 0.0) throw DataError("ng_update_step: epsilon must be > 0");
    const std::vector<int> ks = rank(units, x);
    for (Eigen::Index i = 0; i < units.n(); ++i) {
        const double h = h_lambda(ks[static_cast<std::size_t>(i)], lambda);
        if (h == 0.0) continue;
        units.vectors.row(i) += epsilon * h * (x.transpose() - units.vectors.row(i));
    }
}

void ng_train(GasUnits& units, const Sampler& sampler, const NgTrainConfig& cfg,
              std::uint64_t seed) {
    RandomSource rs(seed);
    const std::int64_t total = cfg.total_iters();
    for (std::int64_t t = 0; t < total; ++t) {
        const Eigen::VectorXd x = sampler(rs);
        ng_update_step(units, x, cfg.epsilon.value(t), cfg.lambda.value(t));
    }
}

double ng_energy(const GasUnits& units, const Eigen::MatrixXd& sample, double lambda) {
    if (sample.rows() == 0) throw DataError("ng_energy: empty sample");
    if (sample.cols() != units.d()) throw DataError("ng_energy: dimension mismatch");

    double c = 0.0;
    for (Eigen::Index i = 0; i < units.n(); ++i) {
        c += h_lambda(static_cast<int>(i), lambda);
    }

    double acc = 0.0;
    for (Eigen::Index r = 0; r < sample.rows(); ++r) {
        const Eigen::VectorXd d2 =
            (units.vectors.rowwise() - sample.row(r)).rowwise().squaredNorm();
        const std::vector<int> ks = ranks_from_sq_dists(d2);
        double e = 0.0;
        for (Eigen::Index i = 0; i < units.n(); ++i) {
            const double h = h_lambda(ks[static_cast<std::size_t>(i)], lambda);
            if (h != 0.0) e += h * d2[i];
        }
        acc += e;
    }
    return acc / (2.0 * c * static_cast<double>(sample.rows()));
}

void RingDataset::validate() const {
    if (!(0.0 < inner_radius && inner_radius < outer_radius)) {
        throw DataError("RingDataset: need 0 < inner_radius < outer_radius");
    }
}

bool RingDataset::contains(const Eigen::Vector2d& p) const {
    const double r = (p - center).norm();
    return inner_radius <= r && r <= outer_radius;
}

Eigen::Vector2d RingDataset::sample(RandomSource& rs) const {
    // Uniform over area: r^2 uniform between the squared radii.
    const double r2 = inner_radius * inner_radius +
                      rs.uniform() * (outer_radius * outer_radius -
                                      inner_radius * inner_radius);
    const double r = std::sqrt(r2);
    const double theta = rs.uniform() * 2.0 * M_PI;
    return center + Eigen::Vector2d(r * std::cos(theta), r * std::sin(theta));
}

double ring_coverage(const GasUnits& units, const RingDataset& ring) {
    if (units.d() != 2) throw DataError("ring_coverage: requires d == 2");
    Eigen::Index inside = 0;
    for (Eigen::Index i = 0; i < units.n(); ++i) {
        if (ring.contains(units.vectors.row(i).transpose())) ++inside;
    }
    return static_cast<double>(inside) / static_cast<double>(units.n());
}

GasUnits init_units_on_disc(int n, const RingDataset& ring, RandomSource& rs) {
    if (n < 1) throw DataError("init_units_on_disc: n must be >= 1");
    GasUnits units;
    units.vectors.resize(n, 2);
    for (int i = 0; i < n; ++i) {
        const double r = ring.outer_radius * std::sqrt(rs.uniform());
        const double theta = rs.uniform() * 2.0 * M_PI;
        units.vectors(i, 0) = ring.center.x() + r * std::cos(theta);
        units.vectors(i, 1) = ring.center.y() + r * std::sin(theta);
    }
    return units;
}

std::vector<RingDemoRow> ring_demo(const RingDataset& ring, int n_units,
                                   const NgTrainConfig& cfg, std::uint64_t seed,
                                   int checkpoints) {
    ring.validate();
    if (checkpoints < 1) throw DataError("ring_demo: checkpoints must be >= 1");

    RandomSource init_rs(derive_seed(seed, 0x696e6974));  // "init"
    GasUnits units = init_units_on_disc(n_units, ring, init_rs);

    RandomSource eval_rs(derive_seed(seed, 0x6576616c));  // "eval"
    Eigen::MatrixXd eval_sample(1000, 2);
    for (Eigen::Index r = 0; r < eval_sample.rows(); ++r) {
        eval_sample.row(r) = ring.sample(eval_rs).transpose();
    }

    const std::int64_t total = cfg.total_iters();
    std::vector<RingDemoRow> rows;
    rows.push_back({0, ring_coverage(units, ring),
                    ng_energy(units, eval_sample, cfg.lambda.value(0))});

    RandomSource train_rs(derive_seed(seed, 0x747261696e));  // "train"
    const std::int64_t chunk = std::max<std::int64_t>(1, total / checkpoints);
    for (std::int64_t t = 0; t < total; ++t) {
        const Eigen::VectorXd x = ring.sample(train_rs);
        ng_update_step(units, x, cfg.epsilon.value(t), cfg.lambda.value(t));
        if ((t + 1) % chunk == 0 || t + 1 == total) {
            rows.push_back({t + 1, ring_coverage(units, ring),
                            ng_energy(units, eval_sample, cfg.lambda.value(t + 1))});
        }
    }
    return rows;
}

}  // namespace resgas
