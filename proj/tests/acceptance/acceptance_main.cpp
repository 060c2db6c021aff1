// Acceptance suite. Each criterion prints one PASS/FAIL line; the binary
// takes the criterion number as its single argument and exits nonzero on
// failure. Criteria 1-8 are exact property suites; 9-13 reproduce the
// benchmark orderings at desk scale (10 seeds, 10000/2000 split, washout
// 100); 14 is the ring-coverage demonstration.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "resgas/csv.hpp"
#include "resgas/datasets.hpp"
#include "resgas/errors.hpp"
#include "resgas/esn_reservoir.hpp"
#include "resgas/eval.hpp"
#include "resgas/neural_gas.hpp"
#include "resgas/random_source.hpp"
#include "resgas/readout.hpp"
#include "resgas/rng_reservoir.hpp"
#include "resgas/spectral.hpp"

using namespace resgas;

namespace {

struct Outcome {
    bool pass = true;
    std::string details;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!details.empty()) details += "; ";
            details += what;
        }
    }
    void note(const std::string& what) {
        if (!details.empty()) details += "; ";
        details += what;
    }
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int ulp_distance(double a, double b) {
    if (a == b) return 0;
    std::int64_t ia, ib;
    std::memcpy(&ia, &a, 8);
    std::memcpy(&ib, &b, 8);
    if ((ia < 0) != (ib < 0)) return 1 << 20;
    const std::int64_t diff = ia > ib ? ia - ib : ib - ia;
    return diff > (1 << 20) ? (1 << 20) : static_cast<int>(diff);
}

std::string fmt(double v) { return format_double(v); }

// ------------------------------------------------------------- criterion 1

Outcome criterion_ng_kmeans_oracle() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    RandomSource rs(11);
    int worst = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 2 + static_cast<int>(rs.below(16));
        const int d = 1 + static_cast<int>(rs.below(5));
        GasUnits u;
        u.vectors.resize(n, d);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) u.vectors(i, j) = rs.uniform(-3.0, 3.0);
        }
        Eigen::VectorXd x(d);
        for (int j = 0; j < d; ++j) x[j] = rs.uniform(-3.0, 3.0);
        const double eps = rs.uniform(0.01, 1.0);

        Eigen::MatrixXd oracle = u.vectors;
        Eigen::Index best = 0;
        double best_d = (oracle.row(0).transpose() - x).squaredNorm();
        for (Eigen::Index i = 1; i < n; ++i) {
            const double dist = (oracle.row(i).transpose() - x).squaredNorm();
            if (dist < best_d) {
                best_d = dist;
                best = i;
            }
        }
        oracle.row(best) += eps * 1.0 * (x.transpose() - oracle.row(best));

        ng_update_step(u, x, eps, 0.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) {
                worst = std::max(worst, ulp_distance(u.vectors(i, j), oracle(i, j)));
            }
        }
    }
    const double elapsed = seconds_since(t0);
    out.require(worst <= 1, "worst ulp distance " + std::to_string(worst));
    out.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " s exceeds 1 s");
    out.note("1000 fuzzed steps, worst ulp " + std::to_string(worst) + ", " +
             fmt(elapsed) + " s");
    return out;
}

// ------------------------------------------------------------- criterion 2

Outcome criterion_joint_space_identity() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    RandomSource rs(22);
    double worst_rel = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        RngParams p;
        p.alpha = rs.uniform(0.5, 4.0);
        p.beta = rs.uniform(0.2, 3.0);
        p.gamma = 1.0;  // activation equals the raw RBF output
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rs.below(24));
        const Eigen::Index d = 1 + static_cast<Eigen::Index>(rs.below(3));
        RngReservoir r(n, d, p, RngVariant::RngJ, 5000 + rep);

        Eigen::MatrixXd warm(3, d);
        for (Eigen::Index i = 0; i < 3; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) warm(i, j) = rs.uniform(-1.0, 1.0);
        }
        r.feed(warm);
        const Eigen::VectorXd v_prev = r.state();
        Eigen::VectorXd x(d);
        for (Eigen::Index j = 0; j < d; ++j) x[j] = rs.uniform(-1.0, 1.0);

        const Eigen::VectorXd s = joint_embed(p, x, v_prev);
        Eigen::VectorXd via_joint(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            via_joint[i] = std::exp(-(joint_embed_unit(r, i) - s).squaredNorm());
        }
        const Eigen::VectorXd via_transfer = r.activate(x);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double rel = std::abs(via_joint[i] - via_transfer[i]) /
                               std::max(std::abs(via_transfer[i]), 1e-300);
            worst_rel = std::max(worst_rel, rel);
        }
    }
    const double elapsed = seconds_since(t0);
    out.require(worst_rel <= 1e-12, "worst relative deviation " + fmt(worst_rel));
    out.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " s exceeds 1 s");
    out.note("1000 reservoirs, worst rel " + fmt(worst_rel) + ", " + fmt(elapsed) + " s");
    return out;
}

// ------------------------------------------------------------- criterion 3

Outcome criterion_ridge_optimality() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    RandomSource rs(33);
    double worst_grad = 0.0;
    double worst_recovery = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const Eigen::Index k = 20 + static_cast<Eigen::Index>(rs.below(60));
        const Eigen::Index n = 3 + static_cast<Eigen::Index>(rs.below(10));
        Eigen::MatrixXd v(k, n);
        for (Eigen::Index i = 0; i < k; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) v(i, j) = rs.uniform(-1.0, 1.0);
        }
        Eigen::VectorXd y(k);
        for (Eigen::Index i = 0; i < k; ++i) y[i] = rs.uniform(-1.0, 1.0);
        const double mu = std::pow(10.0, rs.uniform(-8.0, 0.0));
        const RidgeReadout fit = ridge_fit({v, y, 0}, mu);
        const double grad_norm =
            (v.transpose() * (v * fit.w_out - y) + mu * fit.w_out).norm();
        const double bound = 1e-8 * (1.0 + (v.transpose() * y).norm());
        worst_grad = std::max(worst_grad, grad_norm / bound);

        // Exact recovery of planted weights as mu -> 0.
        Eigen::VectorXd w_star(n);
        for (Eigen::Index j = 0; j < n; ++j) w_star[j] = rs.uniform(-1.0, 1.0);
        const Eigen::VectorXd y_exact = v * w_star;
        const RidgeReadout rec = ridge_fit({v, y_exact, 0}, 1e-10);
        worst_recovery = std::max(worst_recovery, (rec.w_out - w_star).norm());
    }
    const double elapsed = seconds_since(t0);
    out.require(worst_grad <= 1.0, "gradient bound exceeded (ratio " + fmt(worst_grad) + ")");
    out.require(worst_recovery <= 1e-6, "recovery error " + fmt(worst_recovery));
    out.require(elapsed < 5.0, "runtime " + fmt(elapsed) + " s exceeds 5 s");
    out.note("100 instances, worst grad ratio " + fmt(worst_grad) + ", worst recovery " +
             fmt(worst_recovery) + ", " + fmt(elapsed) + " s");
    return out;
}

// ------------------------------------------------------------- criterion 4

Outcome criterion_esn_scaling() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    double worst_rel = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        EsnParams p;
        p.n = 100;
        p.d = 1;
        p.spectral_radius = 0.9;
        p.sparsity = 0.0;  // pre-sparsification contract
        const EsnReservoir r(p, seed);
        const double rho = spectral_radius(r.w_rec());
        worst_rel = std::max(worst_rel, std::abs(rho - 0.9) / 0.9);
    }
    const double elapsed = seconds_since(t0);
    out.require(worst_rel <= 1e-6, "worst relative radius error " + fmt(worst_rel));
    out.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s exceeds 10 s");
    out.note("50 inits, worst rel " + fmt(worst_rel) + ", " + fmt(elapsed) + " s");
    return out;
}

// ------------------------------------------------------------- criterion 5

Outcome criterion_nrmse_anchors() {
    Outcome out;
    RandomSource rs(55);
    for (int rep = 0; rep < 50; ++rep) {
        const Eigen::Index k = 10 + static_cast<Eigen::Index>(rs.below(100));
        Eigen::VectorXd y(k);
        for (Eigen::Index i = 0; i < k; ++i) y[i] = rs.uniform(-2.0, 2.0);
        const Eigen::VectorXd mean_pred = Eigen::VectorXd::Constant(k, y.mean());
        out.require(std::abs(nrmse(mean_pred, y, 0) - 1.0) <= 1e-12,
                    "constant-mean predictor deviates from 1");
        out.require(nrmse(y, y, 0) == 0.0, "perfect predictor is not exactly 0");
    }
    out.note("50 random instances");
    return out;
}

// ------------------------------------------------------------- criterion 6

Outcome criterion_integrator_convergence() {
    Outcome out;
    {
        MackeyGlassParams p;  // dt = 0.005
        const Eigen::VectorXd coarse = mackey_glass_series(p, 1000);
        MackeyGlassParams half = p;
        half.dt = p.dt / 2.0;
        const Eigen::VectorXd fine = mackey_glass_series(half, 1000);
        const double dev =
            (coarse - fine).cwiseAbs().maxCoeff() / fine.cwiseAbs().maxCoeff();
        out.require(dev < 1e-4, "mackey-glass deviation " + fmt(dev));
        out.note("mackey-glass 1000 samples dev " + fmt(dev));
    }
    {
        LorenzParams p;  // dt = 0.005
        const Eigen::MatrixXd coarse = lorenz_series(p, 250);
        LorenzParams half = p;
        half.dt = p.dt / 2.0;
        const Eigen::MatrixXd fine = lorenz_series(half, 250);
        const double dev =
            (coarse - fine).cwiseAbs().maxCoeff() / fine.cwiseAbs().maxCoeff();
        out.require(dev < 1e-4, "lorenz deviation " + fmt(dev));
        out.note("lorenz 250 samples dev " + fmt(dev));
    }
    return out;
}

// ------------------------------------------------------------- criterion 7

Outcome criterion_determinism() {
    Outcome out;
    ExperimentSpec esn;
    esn.dataset.name = "narma";
    esn.dataset.train_len = 2000;
    esn.dataset.test_len = 500;
    esn.model.kind = "esn";
    esn.n = 50;
    esn.washout = 100;
    esn.seed_count = 3;

    ExperimentSpec rng;
    rng.dataset.name = "mackey-glass";
    rng.dataset.t_h = 5;
    rng.dataset.train_len = 2000;
    rng.dataset.test_len = 500;
    rng.model.kind = "m-rng-j";
    rng.model.rng.alpha = 5.0;
    rng.model.rng.gamma = 0.5;
    rng.model.rng.eta = 0.3;
    rng.n = 40;
    rng.washout = 100;
    rng.seed_count = 3;

    for (const ExperimentSpec& spec : {esn, rng}) {
        const RunResult a = run_experiment(spec);
        const RunResult b = run_experiment(spec);
        bool bitwise = a.nrmse_per_seed.size() == b.nrmse_per_seed.size();
        for (std::size_t i = 0; bitwise && i < a.nrmse_per_seed.size(); ++i) {
            bitwise = std::memcmp(&a.nrmse_per_seed[i], &b.nrmse_per_seed[i],
                                  sizeof(double)) == 0;
        }
        out.require(bitwise, spec.model.kind + ": per-seed records differ");
        const SweepRow ra = row_from_result(spec, a);
        const SweepRow rb = row_from_result(spec, b);
        out.require(results_csv({ra}, false) == results_csv({rb}, false),
                    spec.model.kind + ": result csv differs");
    }
    out.note("esn + m-rng-j specs, byte-compared records");
    return out;
}

// ------------------------------------------------------------- criterion 8

Outcome criterion_variant_degeneration() {
    Outcome out;
    const std::pair<RngVariant, RngVariant> pairs[] = {
        {RngVariant::MRngIr, RngVariant::RngIr},
        {RngVariant::MRngIrm, RngVariant::RngIr},
        {RngVariant::MRngJ, RngVariant::RngJ},
        {RngVariant::MRngJm, RngVariant::RngJ},
    };
    RandomSource rs(88);
    Eigen::MatrixXd inputs(400, 2);
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        inputs(i, 0) = rs.uniform(-1.0, 1.0);
        inputs(i, 1) = rs.uniform(-1.0, 1.0);
    }
    const RngTrainConfig cfg(Schedule(0.5, 0.01, 400), Schedule(10.0, 0.1, 400));
    Eigen::MatrixXd probe = inputs.topRows(50);

    for (const auto& [masked_v, base_v] : pairs) {
        RngParams p;
        p.alpha = 8.0;
        p.beta = 0.9;
        p.beta_masked = 0.9;
        p.gamma = 0.4;
        p.eta = 0.0;
        RngReservoir masked(30, 2, p, masked_v, 321);
        RngReservoir base(30, 2, p, base_v, 321);
        masked.pretrain(inputs, cfg);
        base.pretrain(inputs, cfg);
        const bool same_vectors =
            masked.w_in() == base.w_in() && masked.w_rec() == base.w_rec();
        const bool same_outputs = masked.run(probe) == base.run(probe);
        out.require(same_vectors, variant_name(masked_v) + ": trained vectors differ");
        out.require(same_outputs, variant_name(masked_v) + ": run outputs differ");
    }
    out.note("4 masked variants vs unmasked counterparts, bit-exact");
    return out;
}

// ------------------------------------------------- shared desk-scale pieces

ExperimentSpec desk_spec(const std::string& dataset, int t_h, Eigen::Index n) {
    ExperimentSpec spec;
    spec.dataset.name = dataset;
    spec.dataset.t_h = t_h;
    spec.dataset.train_len = 10000;
    spec.dataset.test_len = 2000;
    spec.n = n;
    spec.washout = 100;
    spec.warm_len = 100;
    spec.seed_base = 1;
    spec.seed_count = 10;
    return spec;
}

void apply_esn(ExperimentSpec& spec, double r, double s, double gamma,
               double input_scaling, double mu) {
    spec.model = ModelSpec{};
    spec.model.kind = "esn";
    spec.model.esn_spectral_radius = r;
    spec.model.esn_sparsity = s;
    spec.model.esn_gamma = gamma;
    spec.model.esn_input_scaling = input_scaling;
    spec.model.mu = mu;
}

void apply_rng(ExperimentSpec& spec, const std::string& variant, double alpha,
               double beta, double beta_masked, double gamma, double eta, double mu) {
    spec.model = ModelSpec{};
    spec.model.kind = variant;
    spec.model.rng.alpha = alpha;
    spec.model.rng.beta = beta;
    spec.model.rng.beta_masked = beta_masked;
    spec.model.rng.gamma = gamma;
    spec.model.rng.eta = eta;
    spec.model.mu = mu;
}

struct Interval {
    double mean;
    double half_width;  // 2 * SE over seeds
    double lo() const { return mean - half_width; }
    double hi() const { return mean + half_width; }
};

Interval interval_of(const RunResult& r) {
    const auto n = static_cast<double>(r.nrmse_per_seed.size());
    return {r.mean, 2.0 * std::sqrt(r.variance / n)};
}

std::string show(const Interval& i) {
    return fmt(i.mean) + " +- " + fmt(i.half_width);
}

// ------------------------------------------------------------- criterion 9

Outcome criterion_narma_ordering() {
    Outcome out;
    ExperimentSpec esn = desk_spec("narma", 0, 400);
    apply_esn(esn, 0.99, 0.0, 1.0, 0.5, 1e-6);
    const RunResult esn_result = run_experiment(esn);
    const Interval esn_iv = interval_of(esn_result);
    out.note("esn " + show(esn_iv));

    // Tuned per-variant RNG configurations (grid winners found with the
    // repository's grid-search tool on the same protocol).
    Interval best_rng{1e9, 0.0};
    std::string best_name;
    const struct {
        const char* variant;
        double alpha, beta, beta_masked, gamma, eta, mu;
    } rng_configs[] = {
        {"rng-ir", 30.0, 1.0, 1.0, 1.0, 0.0, 1e-6},
        {"rng-j", 30.0, 1.0, 1.0, 1.0, 0.0, 1e-6},
        {"m-rng-ir", 30.0, 1.0, 1.0, 1.0, 0.25, 1e-6},
        {"m-rng-j", 30.0, 1.0, 1.0, 1.0, 0.25, 1e-6},
        {"m-rng-irm", 30.0, 1.0, 1.0, 1.0, 0.25, 1e-6},
        {"m-rng-jm", 30.0, 1.0, 1.0, 1.0, 0.25, 1e-6},
    };
    for (const auto& c : rng_configs) {
        ExperimentSpec spec = desk_spec("narma", 0, 400);
        apply_rng(spec, c.variant, c.alpha, c.beta, c.beta_masked, c.gamma, c.eta, c.mu);
        const Interval iv = interval_of(run_experiment(spec));
        if (iv.mean < best_rng.mean) {
            best_rng = iv;
            best_name = c.variant;
        }
    }
    out.note("best rng " + best_name + " " + show(best_rng));

    out.require(esn_iv.mean < 0.30, "esn mean " + fmt(esn_iv.mean) + " not < 0.30");
    out.require(esn_iv.mean < best_rng.mean, "esn does not beat the best RNG variant");
    out.require(esn_iv.hi() < best_rng.lo(),
                "2SE intervals overlap: esn " + show(esn_iv) + " vs rng " + show(best_rng));
    return out;
}

// ------------------------------------------------------------ criterion 10

Outcome criterion_mackey_glass_horizon() {
    Outcome out;
    const std::vector<int> horizons{10, 20, 40, 80};
    std::vector<Interval> esn_ivs;
    for (const int th : horizons) {
        ExperimentSpec spec = desk_spec("mackey-glass", th, 300);
        apply_esn(spec, 0.99, 0.0, 1.0, 0.5, 1e-6);
        esn_ivs.push_back(interval_of(run_experiment(spec)));
    }
    std::ostringstream esn_line;
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        esn_line << (i ? ", " : "") << "t_h=" << horizons[i] << ": "
                 << fmt(esn_ivs[i].mean);
    }
    out.note("esn " + esn_line.str());
    for (std::size_t i = 1; i < esn_ivs.size(); ++i) {
        out.require(esn_ivs[i].mean > esn_ivs[i - 1].mean,
                    "esn nrmse not strictly increasing in t_h");
    }

    // Masked variants at the long horizon.
    Interval best{1e9, 0.0};
    std::string best_name;
    const struct {
        const char* variant;
        double alpha, beta, beta_masked, gamma, eta, mu;
    } masked_configs[] = {
        {"m-rng-ir", 10.0, 1.0, 1.0, 0.3, 0.5, 1e-6},
        {"m-rng-j", 10.0, 1.0, 1.0, 0.3, 0.5, 1e-6},
        {"m-rng-irm", 10.0, 1.0, 1.0, 0.3, 0.5, 1e-6},
        {"m-rng-jm", 10.0, 1.0, 1.0, 0.3, 0.5, 1e-6},
    };
    for (const auto& c : masked_configs) {
        ExperimentSpec spec = desk_spec("mackey-glass", 80, 300);
        apply_rng(spec, c.variant, c.alpha, c.beta, c.beta_masked, c.gamma, c.eta, c.mu);
        const Interval iv = interval_of(run_experiment(spec));
        if (iv.mean < best.mean) {
            best = iv;
            best_name = c.variant;
        }
    }
    out.note("best masked rng at t_h=80: " + best_name + " " + show(best));
    out.require(best.mean < esn_ivs.back().mean,
                "masked rng does not beat esn at t_h=80");
    out.require(best.hi() < esn_ivs.back().lo(),
                "2SE intervals overlap at t_h=80: rng " + show(best) + " vs esn " +
                    show(esn_ivs.back()));
    return out;
}

// ------------------------------------------------------------ criterion 11

Outcome criterion_mackey_glass_small_n() {
    Outcome out;
    const std::vector<Eigen::Index> sizes{10, 20, 40, 80};

    std::vector<Interval> esn_ivs;
    for (const Eigen::Index n : sizes) {
        ExperimentSpec spec = desk_spec("mackey-glass", 10, n);
        apply_esn(spec, 0.99, 0.0, 1.0, 0.5, 1e-6);
        esn_ivs.push_back(interval_of(run_experiment(spec)));
    }
    std::ostringstream esn_line;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        esn_line << (i ? ", " : "") << "n=" << sizes[i] << ": " << fmt(esn_ivs[i].mean);
    }
    out.note("esn " + esn_line.str());
    for (std::size_t i = 1; i < esn_ivs.size(); ++i) {
        out.require(esn_ivs[i].mean < esn_ivs[i - 1].mean,
                    "esn nrmse not decreasing in n");
    }
    out.require(esn_ivs.back().mean >= 0.06 && esn_ivs.back().mean <= 0.12,
                "esn at n=80 outside [0.06, 0.12]: " + fmt(esn_ivs.back().mean));

    std::vector<Interval> irm_ivs;
    for (const Eigen::Index n : sizes) {
        ExperimentSpec spec = desk_spec("mackey-glass", 10, n);
        apply_rng(spec, "m-rng-irm", 10.0, 1.0, 1.0, 0.3, 0.5, 1e-6);
        irm_ivs.push_back(interval_of(run_experiment(spec)));
    }
    std::ostringstream irm_line;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        irm_line << (i ? ", " : "") << "n=" << sizes[i] << ": " << fmt(irm_ivs[i].mean);
    }
    out.note("m-rng-irm " + irm_line.str());
    for (const Interval& iv : irm_ivs) {
        out.require(iv.mean < 0.11, "m-rng-irm above 0.11: " + fmt(iv.mean));
    }
    for (std::size_t i = 1; i < irm_ivs.size(); ++i) {
        out.require(irm_ivs[i].mean <= irm_ivs[i - 1].mean + 0.01,
                    "m-rng-irm not flat-to-decreasing");
    }
    return out;
}

// ------------------------------------------------------------ criterion 12

Outcome criterion_lorenz_ordering() {
    Outcome out;
    const std::vector<Eigen::Index> sizes{100, 200, 300, 400};

    Interval esn_best{1e9, 0.0};
    for (const Eigen::Index n : sizes) {
        ExperimentSpec spec = desk_spec("lorenz", 2, n);
        apply_esn(spec, 0.99, 0.0, 1.0, 0.5, 1e-6);
        const Interval iv = interval_of(run_experiment(spec));
        if (iv.mean < esn_best.mean) esn_best = iv;
    }
    out.note("esn best over n: " + show(esn_best));

    Interval rng_best{1e9, 0.0};
    std::string best_name;
    const struct {
        const char* variant;
        double alpha, beta, beta_masked, gamma, eta, mu;
    } rng_configs[] = {
        {"rng-ir", 10.0, 1.0, 1.0, 1.0, 0.0, 1e-6},
        {"rng-j", 10.0, 1.0, 1.0, 1.0, 0.0, 1e-6},
        {"m-rng-ir", 10.0, 1.0, 1.0, 1.0, 0.5, 1e-6},
        {"m-rng-j", 10.0, 1.0, 1.0, 1.0, 0.5, 1e-6},
        {"m-rng-irm", 10.0, 1.0, 1.0, 1.0, 0.5, 1e-6},
        {"m-rng-jm", 10.0, 1.0, 1.0, 1.0, 0.5, 1e-6},
    };
    for (const auto& c : rng_configs) {
        for (const Eigen::Index n : sizes) {
            ExperimentSpec spec = desk_spec("lorenz", 2, n);
            apply_rng(spec, c.variant, c.alpha, c.beta, c.beta_masked, c.gamma, c.eta,
                      c.mu);
            const Interval iv = interval_of(run_experiment(spec));
            if (iv.mean < rng_best.mean) {
                rng_best = iv;
                best_name = c.variant;
            }
        }
    }
    out.note("rng best " + best_name + " " + show(rng_best));
    out.require(rng_best.mean < esn_best.mean, "rng does not beat esn on lorenz");
    out.require(rng_best.hi() < esn_best.lo(),
                "2SE intervals overlap: rng " + show(rng_best) + " vs esn " +
                    show(esn_best));
    return out;
}

// ------------------------------------------------------------ criterion 13

Outcome criterion_lambda_ablation() {
    Outcome out;
    auto run_lambda = [&](Eigen::Index n, double li, double lf) {
        ExperimentSpec spec = desk_spec("mackey-glass", 20, n);
        apply_rng(spec, "rng-ir", 10.0, 1.0, 1.0, 0.3, 0.0, 1e-6);
        spec.pretrain.lambda_i = li;
        spec.pretrain.lambda_f = lf;
        return interval_of(run_experiment(spec));
    };

    const Interval decay400 = run_lambda(400, 50.0, 0.01);
    const Interval const1_400 = run_lambda(400, 1.0, 1.0);
    const Interval const0_400 = run_lambda(400, 0.0, 0.0);
    const Interval const0_100 = run_lambda(100, 0.0, 0.0);

    out.note("n=400 decay " + fmt(decay400.mean) + ", const1 " + fmt(const1_400.mean) +
             ", const0 " + fmt(const0_400.mean) + "; const0 n=100 " +
             fmt(const0_100.mean));
    out.require(decay400.mean < const1_400.mean,
                "decay(50->0.01) not better than constant 1.0 at n=400");
    out.require(const1_400.mean < const0_400.mean,
                "constant 1.0 not better than constant 0 at n=400");
    out.require(const0_400.mean >= const0_100.mean - 1e-3,
                "lambda=0 series improved from n=100 to n=400");
    return out;
}

// ------------------------------------------------------------ criterion 14

Outcome criterion_ring_coverage() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    const RingDataset ring;
    double decay_sum = 0.0;
    double kmeans_sum = 0.0;
    const std::int64_t iters = 100000;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const NgTrainConfig decay_cfg(Schedule(0.5, 0.005, iters),
                                      Schedule(8.0, 0.1, iters));
        decay_sum += ring_demo(ring, 100, decay_cfg, seed, 1).back().coverage;
        const NgTrainConfig kmeans_cfg(Schedule(0.5, 0.005, iters),
                                       Schedule::constant(0.0, iters));
        kmeans_sum += ring_demo(ring, 100, kmeans_cfg, seed, 1).back().coverage;
    }
    const double decay_mean = decay_sum / 10.0;
    const double kmeans_mean = kmeans_sum / 10.0;
    const double elapsed = seconds_since(t0);
    out.note("decay coverage " + fmt(decay_mean) + ", lambda=0 coverage " +
             fmt(kmeans_mean) + ", " + fmt(elapsed) + " s");
    out.require(decay_mean - kmeans_mean >= 0.2,
                "coverage gap " + fmt(decay_mean - kmeans_mean) + " below 0.2");
    out.require(elapsed < 120.0, "runtime " + fmt(elapsed) + " s exceeds 2 min");
    return out;
}

struct Criterion {
    std::string name;
    std::function<Outcome()> fn;
};

const std::map<int, Criterion>& criteria() {
    static const std::map<int, Criterion> table = {
        {1, {"NG/K-means oracle equivalence (lambda=0, 1 ulp)", criterion_ng_kmeans_oracle}},
        {2, {"joint-space transfer identity (1e-12 relative)", criterion_joint_space_identity}},
        {3, {"ridge optimality and exact recovery", criterion_ridge_optimality}},
        {4, {"ESN spectral-radius scaling (1e-6 relative)", criterion_esn_scaling}},
        {5, {"NRMSE anchors (constant-mean = 1, perfect = 0)", criterion_nrmse_anchors}},
        {6, {"integrator step-halving convergence (< 1e-4)", criterion_integrator_convergence}},
        {7, {"experiment determinism (byte-identical records)", criterion_determinism}},
        {8, {"eta=0 variant degeneration (bit-exact)", criterion_variant_degeneration}},
        {9, {"NARMA-10 n=400: ESN beats best RNG, ESN < 0.30", criterion_narma_ordering}},
        {10, {"Mackey-Glass horizon sweep: ESN degrades faster", criterion_mackey_glass_horizon}},
        {11, {"Mackey-Glass small-n sweep levels", criterion_mackey_glass_small_n}},
        {12, {"Lorenz t_h=2: best RNG beats ESN", criterion_lorenz_ordering}},
        {13, {"lambda ablation ordering on Mackey-Glass t_h=20", criterion_lambda_ablation}},
        {14, {"ring demo coverage gap >= 0.2", criterion_ring_coverage}},
    };
    return table;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> to_run;
    if (argc < 2) {
        for (const auto& [num, c] : criteria()) to_run.push_back(num);
    } else {
        for (int i = 1; i < argc; ++i) to_run.push_back(std::atoi(argv[i]));
    }

    bool all_pass = true;
    for (const int num : to_run) {
        const auto it = criteria().find(num);
        if (it == criteria().end()) {
            std::cout << "[FAIL] criterion " << num << ": unknown criterion\n";
            all_pass = false;
            continue;
        }
        Outcome outcome;
        try {
            outcome = it->second.fn();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.note(std::string("exception: ") + e.what());
        }
        std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << num
                  << ": " << it->second.name;
        if (!outcome.details.empty()) std::cout << " — " << outcome.details;
        std::cout << "\n" << std::flush;
        all_pass = all_pass && outcome.pass;
    }
    return all_pass ? 0 : 1;
}
