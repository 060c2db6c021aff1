#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "resgas/errors.hpp"
#include "resgas/random_source.hpp"
#include "resgas/readout.hpp"

using namespace resgas;

namespace {

Eigen::MatrixXd random_states(Eigen::Index rows, Eigen::Index cols, RandomSource& rs) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rs.uniform(-1.0, 1.0);
    }
    return m;
}

// Normal-equations solve (VᵀV + mu I) w = Vᵀ y in long double with partial
// pivoting; independent of the library's solver path.
Eigen::VectorXd normal_equations_oracle(const Eigen::MatrixXd& v,
                                        const Eigen::VectorXd& y, double mu) {
    const Eigen::Index n = v.cols();
    const Eigen::Index k = v.rows();
    std::vector<std::vector<long double>> a(
        static_cast<std::size_t>(n), std::vector<long double>(static_cast<std::size_t>(n), 0.0L));
    std::vector<long double> b(static_cast<std::size_t>(n), 0.0L);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            long double acc = 0.0L;
            for (Eigen::Index t = 0; t < k; ++t) {
                acc += static_cast<long double>(v(t, i)) * static_cast<long double>(v(t, j));
            }
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc;
        }
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] += mu;
        long double acc = 0.0L;
        for (Eigen::Index t = 0; t < k; ++t) {
            acc += static_cast<long double>(v(t, i)) * static_cast<long double>(y(t));
        }
        b[static_cast<std::size_t>(i)] = acc;
    }

    // Gaussian elimination with partial pivoting.
    const auto nn = static_cast<std::size_t>(n);
    for (std::size_t col = 0; col < nn; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < nn; ++r) {
            if (std::fabs(static_cast<double>(a[r][col])) >
                std::fabs(static_cast<double>(a[piv][col]))) {
                piv = r;
            }
        }
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < nn; ++r) {
            const long double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < nn; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    Eigen::VectorXd w(n);
    for (std::size_t r = nn; r-- > 0;) {
        long double acc = b[r];
        for (std::size_t c = r + 1; c < nn; ++c) {
            acc -= a[r][c] * static_cast<long double>(w(static_cast<Eigen::Index>(c)));
        }
        w(static_cast<Eigen::Index>(r)) = static_cast<double>(acc / a[r][r]);
    }
    return w;
}

}  // namespace

TEST_CASE("identity states interpolate exactly") {
    const Eigen::Index n = 6;
    RandomSource rs(1);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = rs.uniform(-2.0, 2.0);
    const RidgeReadout fit = ridge_fit({Eigen::MatrixXd::Identity(n, n), y, 0}, 0.0);
    CHECK((fit.w_out - y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single constant column fits the mean") {
    Eigen::MatrixXd v = Eigen::MatrixXd::Ones(20, 1);
    Eigen::VectorXd y = Eigen::VectorXd::Constant(20, 3.25);
    const RidgeReadout fit = ridge_fit({v, y, 0}, 0.0);
    REQUIRE(fit.w_out.size() == 1);
    CHECK(fit.w_out[0] == doctest::Approx(3.25).epsilon(1e-14));
}

TEST_CASE("recovers the generating weights and matches the oracle") {
    RandomSource rs(42);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::MatrixXd v = random_states(20, 5, rs);
        Eigen::VectorXd w_star(5);
        for (Eigen::Index i = 0; i < 5; ++i) w_star[i] = rs.uniform(-1.0, 1.0);
        const Eigen::VectorXd y = v * w_star;

        const RidgeReadout tiny = ridge_fit({v, y, 0}, 1e-10);
        CHECK((tiny.w_out - w_star).norm() <= 1e-6);

        const RidgeReadout one = ridge_fit({v, y, 0}, 1.0);
        const Eigen::VectorXd expected = normal_equations_oracle(v, y, 1.0);
        CHECK((one.w_out - expected).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("rank-deficient system with mu=0 is a distinct error") {
    Eigen::MatrixXd v(8, 3);
    RandomSource rs(5);
    for (Eigen::Index i = 0; i < 8; ++i) {
        v(i, 0) = rs.uniform(-1.0, 1.0);
        v(i, 1) = 2.0 * v(i, 0);  // duplicate direction
        v(i, 2) = rs.uniform(-1.0, 1.0);
    }
    Eigen::VectorXd y = Eigen::VectorXd::Ones(8);
    CHECK_THROWS_AS(ridge_fit({v, y, 0}, 0.0), NumericalError);
    CHECK_NOTHROW(ridge_fit({v, y, 0}, 1e-6));
}

TEST_CASE("ridge_predict shapes and values") {
    RidgeReadout zero;
    zero.w_out = Eigen::VectorXd::Zero(4);
    const Eigen::MatrixXd v = Eigen::MatrixXd::Random(6, 4);
    CHECK(ridge_predict(zero, v).cwiseAbs().maxCoeff() == 0.0);

    RidgeReadout ab;
    ab.w_out.resize(2);
    ab.w_out << 1.5, -2.5;
    const Eigen::VectorXd yhat = ridge_predict(ab, Eigen::MatrixXd::Identity(2, 2));
    CHECK(yhat[0] == 1.5);
    CHECK(yhat[1] == -2.5);

    CHECK_THROWS_AS(ridge_predict(ab, Eigen::MatrixXd::Identity(3, 3)), DataError);
}

TEST_CASE("train-set interpolation on full-rank square states") {
    RandomSource rs(8);
    const Eigen::MatrixXd v =
        random_states(5, 5, rs) + 3.0 * Eigen::MatrixXd::Identity(5, 5);
    Eigen::VectorXd y(5);
    for (Eigen::Index i = 0; i < 5; ++i) y[i] = rs.uniform(-1.0, 1.0);
    const RidgeReadout fit = ridge_fit({v, y, 0}, 0.0);
    CHECK((ridge_predict(fit, v) - y).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("ridge_loss values and local optimality") {
    RandomSource rs(17);
    const Eigen::MatrixXd v = random_states(30, 4, rs);
    Eigen::VectorXd y(30);
    for (Eigen::Index i = 0; i < 30; ++i) y[i] = rs.uniform(-1.0, 1.0);
    const StateTargetPair data{v, y, 0};

    RidgeReadout zero;
    zero.w_out = Eigen::VectorXd::Zero(4);
    zero.mu = 0.0;
    CHECK(ridge_loss(zero, data) == doctest::Approx(0.5 * y.squaredNorm()).epsilon(1e-14));

    const Eigen::VectorXd w_star = normal_equations_oracle(v, y, 0.0);
    RidgeReadout perfect;
    perfect.w_out = w_star;
    perfect.mu = 0.0;
    const Eigen::VectorXd y_fit = v * w_star;
    CHECK(ridge_loss(perfect, {v, y_fit, 0}) <= 1e-18);

    const double mu = 0.05;
    const RidgeReadout fitted = ridge_fit(data, mu);
    const double base_loss = ridge_loss(fitted, data);
    for (int probe = 0; probe < 1000; ++probe) {
        Eigen::VectorXd delta(4);
        for (Eigen::Index i = 0; i < 4; ++i) delta[i] = rs.uniform(-1.0, 1.0);
        delta *= 1e-2 / delta.norm();
        RidgeReadout perturbed = fitted;
        perturbed.w_out += delta;
        CHECK(ridge_loss(perturbed, data) >= base_loss);
    }
}

TEST_CASE("fitted gradient is numerically zero") {
    RandomSource rs(23);
    for (int rep = 0; rep < 100; ++rep) {
        const Eigen::Index k = 10 + static_cast<Eigen::Index>(rs.below(30));
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rs.below(6));
        const Eigen::MatrixXd v = random_states(k, n, rs);
        Eigen::VectorXd y(k);
        for (Eigen::Index i = 0; i < k; ++i) y[i] = rs.uniform(-1.0, 1.0);
        const double mu = std::pow(10.0, rs.uniform(-8.0, 0.0));
        const RidgeReadout fit = ridge_fit({v, y, 0}, mu);
        const Eigen::VectorXd grad =
            v.transpose() * (v * fit.w_out - y) + mu * fit.w_out;
        CHECK(grad.norm() <= 1e-8 * (1.0 + (v.transpose() * y).norm()));
    }
}

TEST_CASE("weight norm shrinks as mu grows") {
    RandomSource rs(31);
    const Eigen::MatrixXd v = random_states(50, 6, rs);
    Eigen::VectorXd y(50);
    for (Eigen::Index i = 0; i < 50; ++i) y[i] = rs.uniform(-1.0, 1.0);
    double prev = std::numeric_limits<double>::infinity();
    for (const double mu : {1e-8, 1e-6, 1e-4, 1e-2, 1.0, 100.0}) {
        const double norm = ridge_fit({v, y, 0}, mu).w_out.norm();
        CHECK(norm <= prev + 1e-12);
        prev = norm;
    }
}

TEST_CASE("fit is invariant to post-washout row order") {
    RandomSource rs(37);
    const Eigen::MatrixXd v = random_states(40, 5, rs);
    Eigen::VectorXd y(40);
    for (Eigen::Index i = 0; i < 40; ++i) y[i] = rs.uniform(-1.0, 1.0);

    std::vector<Eigen::Index> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    rs.shuffle(perm);
    Eigen::MatrixXd vp(40, 5);
    Eigen::VectorXd yp(40);
    for (Eigen::Index i = 0; i < 40; ++i) {
        vp.row(i) = v.row(perm[static_cast<std::size_t>(i)]);
        yp[i] = y[perm[static_cast<std::size_t>(i)]];
    }
    const Eigen::VectorXd w1 = ridge_fit({v, y, 0}, 1e-4).w_out;
    const Eigen::VectorXd w2 = ridge_fit({vp, yp, 0}, 1e-4).w_out;
    CHECK((w1 - w2).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("washout rows are excluded from the fit") {
    RandomSource rs(41);
    const Eigen::MatrixXd v = random_states(30, 3, rs);
    Eigen::VectorXd y(30);
    for (Eigen::Index i = 0; i < 30; ++i) y[i] = rs.uniform(-1.0, 1.0);

    const RidgeReadout with_washout = ridge_fit({v, y, 10}, 1e-6);
    const RidgeReadout trimmed =
        ridge_fit({v.bottomRows(20), y.tail(20), 0}, 1e-6);
    CHECK(with_washout.w_out == trimmed.w_out);

    CHECK_THROWS_AS(ridge_fit({v, y, 30}, 1e-6), DataError);
    CHECK_THROWS_AS(ridge_fit({v, y, 0}, -1.0), DataError);
}

TEST_CASE("optional bias column fits constant offsets") {
    RandomSource rs(43);
    const Eigen::MatrixXd v = random_states(60, 4, rs);
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(60, 2.0);
    const RidgeReadout fit = ridge_fit({v, y, 0}, 1e-10, /*add_bias=*/true);
    REQUIRE(fit.w_out.size() == 5);
    const Eigen::VectorXd yhat = ridge_predict(fit, v);
    CHECK((yhat.array() - 2.0).abs().maxCoeff() < 1e-6);
}
