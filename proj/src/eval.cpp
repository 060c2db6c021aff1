#include "resgas/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "resgas/errors.hpp"
#include "resgas/esn_reservoir.hpp"
#include "resgas/parallel.hpp"
#include "resgas/random_source.hpp"
#include "resgas/readout.hpp"

namespace resgas {

namespace {

constexpr std::uint64_t kDataStream = 0x64617461;   // "data"
constexpr std::uint64_t kModelStream = 0x6d6f646c;  // "modl"

}  // namespace

double nrmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual,
             Eigen::Index washout) {
    if (predicted.size() != actual.size()) throw DataError("nrmse: length mismatch");
    if (washout < 0 || washout >= actual.size()) {
        throw DataError("nrmse: washout must lie in [0, K)");
    }
    const Eigen::Index k = actual.size() - washout;
    const auto pred = predicted.tail(k);
    const auto act = actual.tail(k);

    const double mean = act.mean();
    const double var = (act.array() - mean).square().sum() / static_cast<double>(k);
    if (var == 0.0) {
        throw NumericalError("nrmse: zero variance in true values");
    }
    const double err = (pred - act).squaredNorm();
    return std::sqrt(err / (static_cast<double>(k) * var));
}

Eigen::Index DatasetSpec::input_dim() const {
    if (name == "narma" || name == "mackey-glass") return 1;
    if (name == "lorenz") return 3;
    throw ConfigError("unknown dataset: " + name);
}

void DatasetSpec::validate() const {
    input_dim();
    if (train_len < 1 || test_len < 1) throw DataError("DatasetSpec: lengths must be >= 1");
    if (t_h < 0) throw DataError("DatasetSpec: t_h must be >= 0");
}

LabeledSequence DatasetSpec::generate(std::uint64_t seed) const {
    validate();
    const Eigen::Index total = train_len + test_len;
    if (name == "narma") {
        return gen_narma(narma, total, seed);
    }
    if (name == "mackey-glass") {
        MackeyGlassParams p = mackey_glass;
        p.t_h = t_h;
        return gen_mackey_glass(p, total);
    }
    LorenzParams p = lorenz;
    p.t_h = t_h;
    return gen_lorenz(p, total);
}

void ModelSpec::validate() const {
    if (mu < 0.0) throw DataError("ModelSpec: mu must be >= 0");
    if (is_esn()) {
        if (esn_spectral_radius <= 0.0) throw DataError("ModelSpec: r must be > 0");
        if (esn_sparsity < 0.0 || esn_sparsity >= 1.0) throw DataError("ModelSpec: s in [0, 1)");
        if (esn_gamma <= 0.0 || esn_gamma > 1.0) throw DataError("ModelSpec: gamma in (0, 1]");
        if (esn_input_scaling <= 0.0) throw DataError("ModelSpec: input_scaling must be > 0");
        return;
    }
    variant();  // throws on unknown kind
    rng.validate();
}

RngTrainConfig PretrainSpec::config_for(Eigen::Index sequence_len) const {
    const std::int64_t total = static_cast<std::int64_t>(passes) * sequence_len;
    return RngTrainConfig(Schedule(epsilon_i, epsilon_f, total),
                          Schedule(lambda_i, lambda_f, total), passes);
}

std::size_t GridSpec::point_count() const {
    std::size_t count = 1;
    for (const auto& [name, values] : axes) count *= values.size();
    return count;
}

void ExperimentSpec::validate() const {
    dataset.validate();
    model.validate();
    if (n < 1) throw DataError("ExperimentSpec: n must be >= 1");
    if (seed_count < 1) throw DataError("ExperimentSpec: seed_count must be >= 1");
    if (washout < 0 || washout >= dataset.test_len) {
        throw DataError("ExperimentSpec: washout must be < test length");
    }
    if (warm_len < 0 || warm_len > dataset.train_len) {
        throw DataError("ExperimentSpec: warm_len must be <= train length");
    }
    if (pretrain.passes < 0) throw DataError("ExperimentSpec: pretrain passes must be >= 0");
}

nlohmann::json ExperimentSpec::to_json() const {
    nlohmann::json j;
    j["dataset"] = {{"name", dataset.name},
                    {"t_h", dataset.t_h},
                    {"train_len", dataset.train_len},
                    {"test_len", dataset.test_len}};
    if (dataset.name == "narma") {
        j["dataset"]["order"] = dataset.narma.order;
        j["dataset"]["delta"] = dataset.narma.delta;
    } else if (dataset.name == "mackey-glass") {
        j["dataset"]["tau"] = dataset.mackey_glass.tau;
        j["dataset"]["dt"] = dataset.mackey_glass.dt;
    } else {
        j["dataset"]["dt"] = dataset.lorenz.dt;
    }
    j["model"] = {{"kind", model.kind}, {"mu", model.mu}, {"readout_bias", model.readout_bias}};
    if (model.is_esn()) {
        j["model"]["r"] = model.esn_spectral_radius;
        j["model"]["s"] = model.esn_sparsity;
        j["model"]["gamma"] = model.esn_gamma;
        j["model"]["input_scaling"] = model.esn_input_scaling;
    } else {
        j["model"]["alpha"] = model.rng.alpha;
        j["model"]["beta"] = model.rng.beta;
        j["model"]["beta_masked"] = model.rng.beta_masked;
        j["model"]["gamma"] = model.rng.gamma;
        j["model"]["eta"] = model.rng.eta;
        j["pretrain"] = {{"epsilon_i", pretrain.epsilon_i},
                         {"epsilon_f", pretrain.epsilon_f},
                         {"lambda_i", pretrain.lambda_i},
                         {"lambda_f", pretrain.lambda_f},
                         {"passes", pretrain.passes}};
    }
    j["n"] = n;
    j["washout"] = washout;
    j["warm_len"] = warm_len;
    j["seed_base"] = seed_base;
    j["seed_count"] = seed_count;
    return j;
}

std::pair<LabeledSequence, LabeledSequence> prepare_splits(const ExperimentSpec& spec,
                                                           std::uint64_t seed) {
    const LabeledSequence raw = spec.dataset.generate(derive_seed(seed, kDataStream));
    auto [train, test] = split(raw, spec.dataset.train_len, spec.dataset.test_len);
    return rescale_sequences(std::move(train), std::move(test));
}

EsnReservoir build_esn(const ExperimentSpec& spec, std::uint64_t seed,
                       const LabeledSequence& train) {
    EsnParams p;
    p.n = spec.n;
    p.d = train.dim();
    p.spectral_radius = spec.model.esn_spectral_radius;
    p.sparsity = spec.model.esn_sparsity;
    p.gamma = spec.model.esn_gamma;
    p.input_scaling = spec.model.esn_input_scaling;
    return EsnReservoir(p, derive_seed(seed, kModelStream));
}

RngReservoir build_rng(const ExperimentSpec& spec, std::uint64_t seed,
                       const LabeledSequence& train) {
    RngReservoir reservoir(spec.n, train.dim(), spec.model.rng, spec.model.variant(),
                           derive_seed(seed, kModelStream));
    if (spec.pretrain.passes > 0) {
        reservoir.pretrain(train.X, spec.pretrain.config_for(train.length()));
    }
    return reservoir;
}

namespace {

struct SeedOutcome {
    double nrmse_value = std::numeric_limits<double>::quiet_NaN();
    bool ok = false;
    std::string error;
    nlohmann::json metadata;
};

// One full train/test evaluation on prepared (rescaled) splits.
template <typename Reservoir>
SeedOutcome evaluate_reservoir(const ExperimentSpec& spec, Reservoir& reservoir,
                               const LabeledSequence& train,
                               const LabeledSequence& test) {
    SeedOutcome out;
    Eigen::MatrixXd v_train = reservoir.run(train.X);
    reservoir.reset_state();
    if (spec.warm_len > 0) {
        reservoir.feed(train.X.bottomRows(std::min(spec.warm_len, train.length())));
    }
    const Eigen::MatrixXd v_test = reservoir.collect(test.X);

    StateTargetPair fit_data{std::move(v_train), train.y,
                             spec.washout_in_fit ? spec.washout : 0};
    const RidgeReadout readout =
        ridge_fit(fit_data, spec.model.mu, spec.model.readout_bias);
    const Eigen::VectorXd yhat = ridge_predict(readout, v_test);
    out.nrmse_value = nrmse(yhat, test.y, spec.washout);
    out.ok = true;
    return out;
}

SeedOutcome run_single_seed(const ExperimentSpec& spec, std::uint64_t seed,
                            const LabeledSequence* shared_raw) {
    try {
        LabeledSequence train;
        LabeledSequence test;
        if (shared_raw) {
            auto [tr, te] =
                split(*shared_raw, spec.dataset.train_len, spec.dataset.test_len);
            std::tie(train, test) = rescale_sequences(std::move(tr), std::move(te));
        } else {
            std::tie(train, test) = prepare_splits(spec, seed);
        }
        if (spec.model.is_esn()) {
            EsnReservoir reservoir = build_esn(spec, seed, train);
            SeedOutcome out = evaluate_reservoir(spec, reservoir, train, test);
            out.metadata["measured_radius"] = reservoir.measured_radius();
            if (reservoir.redraw_count() > 0) {
                out.metadata["degenerate_redraws"] = reservoir.redraw_count();
            }
            return out;
        }
        RngReservoir reservoir = build_rng(spec, seed, train);
        return evaluate_reservoir(spec, reservoir, train, test);
    } catch (const std::exception& e) {
        SeedOutcome out;
        out.error = e.what();
        return out;
    }
}

void aggregate(const std::vector<SeedOutcome>& outcomes,
               const std::vector<std::uint64_t>& seeds, RunResult& result) {
    result.seeds = seeds;
    result.nrmse_per_seed.clear();
    nlohmann::json failures = nlohmann::json::array();
    double sum = 0.0;
    Eigen::Index ok_count = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        result.nrmse_per_seed.push_back(outcomes[i].nrmse_value);
        if (outcomes[i].ok) {
            sum += outcomes[i].nrmse_value;
            ++ok_count;
        } else {
            failures.push_back({{"seed", seeds[i]}, {"error", outcomes[i].error}});
        }
    }
    if (ok_count == 0) {
        throw NumericalError("run_experiment: every seed failed ("
                             + failures.dump() + ")");
    }
    result.mean = sum / static_cast<double>(ok_count);
    double var = 0.0;
    for (const SeedOutcome& o : outcomes) {
        if (o.ok) {
            const double dev = o.nrmse_value - result.mean;
            var += dev * dev;
        }
    }
    result.variance = var / static_cast<double>(ok_count);
    if (!failures.empty()) result.metadata["seed_failures"] = failures;
    result.metadata["successful_seeds"] = ok_count;
}

RunResult run_seeds(const ExperimentSpec& spec, std::uint64_t seed_base,
                    int seed_count) {
    std::vector<std::uint64_t> seeds;
    seeds.reserve(static_cast<std::size_t>(seed_count));
    for (int i = 0; i < seed_count; ++i) {
        seeds.push_back(seed_base + static_cast<std::uint64_t>(i));
    }

    // Seed-independent generators produce one shared series.
    LabeledSequence shared;
    const LabeledSequence* shared_ptr = nullptr;
    if (!spec.dataset.seed_dependent()) {
        shared = spec.dataset.generate(0);
        shared_ptr = &shared;
    }

    std::vector<SeedOutcome> outcomes(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        outcomes[i] = run_single_seed(spec, seeds[i], shared_ptr);
    });

    RunResult result;
    aggregate(outcomes, seeds, result);
    for (const SeedOutcome& o : outcomes) {
        if (o.ok && !o.metadata.is_null()) {
            result.metadata["reservoir"] = o.metadata;
            break;
        }
    }
    result.metadata["spec"] = spec.to_json();
    return result;
}

}  // namespace

RunResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    return run_seeds(spec, spec.seed_base, spec.seed_count);
}

namespace {

std::vector<std::vector<double>> cartesian_product(const GridSpec& grid) {
    std::vector<std::vector<double>> points{{}};
    for (const auto& [name, values] : grid.axes) {
        if (values.empty()) throw ConfigError("grid_search: empty axis " + name);
        std::vector<std::vector<double>> next;
        next.reserve(points.size() * values.size());
        for (const auto& p : points) {
            for (double v : values) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        }
        points = std::move(next);
    }
    return points;
}

std::string format_point(const GridSpec& grid, const std::vector<double>& point) {
    std::ostringstream os;
    for (std::size_t a = 0; a < grid.axes.size(); ++a) {
        if (a > 0) os << " ";
        os << grid.axes[a].first << "=" << point[a];
    }
    return os.str();
}

void apply_axis(ModelSpec& model, const std::string& name, double value) {
    if (name == "mu") {
        model.mu = value;
    } else if (model.is_esn()) {
        if (name == "r") model.esn_spectral_radius = value;
        else if (name == "s") model.esn_sparsity = value;
        else if (name == "gamma") model.esn_gamma = value;
        else if (name == "input_scaling") model.esn_input_scaling = value;
        else throw ConfigError("grid_search: unknown ESN axis " + name);
    } else {
        if (name == "alpha") model.rng.alpha = value;
        else if (name == "beta") model.rng.beta = value;
        else if (name == "beta_masked") model.rng.beta_masked = value;
        else if (name == "gamma") model.rng.gamma = value;
        else if (name == "eta") model.rng.eta = value;
        else throw ConfigError("grid_search: unknown RNG axis " + name);
    }
}

ExperimentSpec spec_with_point(const ExperimentSpec& spec,
                               const std::vector<double>& point) {
    ExperimentSpec out = spec;
    out.grid = GridSpec{};
    for (std::size_t a = 0; a < spec.grid.axes.size(); ++a) {
        apply_axis(out.model, spec.grid.axes[a].first, point[a]);
    }
    return out;
}

}  // namespace

GridSearchResult grid_search(const ExperimentSpec& spec) {
    spec.validate();
    if (spec.grid.empty()) throw ConfigError("grid_search: spec has no grid");
    if (spec.grid_val_len < 1 || spec.grid_val_len >= spec.dataset.train_len) {
        throw DataError("grid_search: validation length must be < train length");
    }

    const auto points = cartesian_product(spec.grid);

    // Validation protocol: the last grid_val_len steps of the training span
    // are held out; candidates are ranked by mean NRMSE there over a reduced
    // seed set and the winner is refit on the full protocol.
    GridSearchResult result;
    result.scores.resize(points.size());
    const double inf = std::numeric_limits<double>::infinity();

    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        ExperimentSpec candidate = spec_with_point(spec, points[pi]);
        candidate.seed_count = spec.grid_seed_count;
        candidate.dataset.train_len = spec.dataset.train_len - spec.grid_val_len;
        candidate.dataset.test_len = spec.grid_val_len;
        result.scores[pi].point = format_point(spec.grid, points[pi]);
        try {
            candidate.validate();
            const RunResult vr = run_seeds(candidate, spec.seed_base,
                                           spec.grid_seed_count);
            result.scores[pi].validation_nrmse = vr.mean;
        } catch (const std::exception&) {
            result.scores[pi].validation_nrmse = inf;
        }
    }

    std::size_t best = 0;
    for (std::size_t pi = 1; pi < points.size(); ++pi) {
        if (result.scores[pi].validation_nrmse < result.scores[best].validation_nrmse) {
            best = pi;
        }
    }
    if (result.scores[best].validation_nrmse == inf) {
        throw NumericalError("grid_search: every grid point failed validation");
    }

    ExperimentSpec winner = spec_with_point(spec, points[best]);
    result.best_point = result.scores[best].point;
    result.result = run_experiment(winner);
    result.result.best_grid_point = result.best_point;
    nlohmann::json scores = nlohmann::json::array();
    for (const auto& s : result.scores) {
        scores.push_back({{"point", s.point},
                          {"validation_nrmse",
                           std::isinf(s.validation_nrmse) ? -1.0 : s.validation_nrmse}});
    }
    result.result.metadata["grid_scores"] = scores;
    return result;
}

SweepRow row_from_result(const ExperimentSpec& spec, const RunResult& result) {
    SweepRow row;
    row.dataset = spec.dataset.name;
    row.variant = spec.model.kind;
    row.n = spec.n;
    row.t_h = spec.dataset.name == "narma" ? 0 : spec.dataset.t_h;
    if (!spec.model.is_esn()) {
        row.lambda_i = spec.pretrain.lambda_i;
        row.lambda_f = spec.pretrain.lambda_f;
    }
    row.seed_count = spec.seed_count;
    row.nrmse_mean = result.mean;
    row.nrmse_var = result.variance;
    row.best_grid_point = result.best_grid_point;
    return row;
}

namespace {

SweepRow run_point(const ExperimentSpec& spec) {
    if (!spec.grid.empty()) {
        const GridSearchResult g = grid_search(spec);
        return row_from_result(spec, g.result);
    }
    return row_from_result(spec, run_experiment(spec));
}

}  // namespace

std::vector<SweepRow> sweep_units(const ExperimentSpec& spec,
                                  const std::vector<Eigen::Index>& n_values) {
    if (n_values.empty()) throw ConfigError("sweep_units: empty value list");
    std::vector<SweepRow> rows;
    for (const Eigen::Index n : n_values) {
        ExperimentSpec s = spec;
        s.n = n;
        rows.push_back(run_point(s));
    }
    return rows;
}

std::vector<SweepRow> sweep_horizon(const ExperimentSpec& spec,
                                    const std::vector<int>& t_h_values) {
    if (t_h_values.empty()) throw ConfigError("sweep_horizon: empty value list");
    if (spec.dataset.name == "narma") {
        throw ConfigError("sweep_horizon: NARMA has no horizon parameter");
    }
    std::vector<SweepRow> rows;
    for (const int th : t_h_values) {
        ExperimentSpec s = spec;
        s.dataset.t_h = th;
        rows.push_back(run_point(s));
    }
    return rows;
}

std::vector<SweepRow> sweep_lambda(
    const ExperimentSpec& spec,
    const std::vector<std::pair<double, double>>& regimes) {
    if (regimes.empty()) throw ConfigError("sweep_lambda: empty regime list");
    if (spec.model.is_esn()) {
        throw ConfigError("sweep_lambda: requires an RNG variant");
    }
    std::vector<SweepRow> rows;
    for (const auto& [li, lf] : regimes) {
        ExperimentSpec s = spec;
        s.pretrain.lambda_i = li;
        s.pretrain.lambda_f = lf;
        rows.push_back(run_point(s));
    }
    return rows;
}

}  // namespace resgas
