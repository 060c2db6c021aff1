#include "resgas/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resgas/config.hpp"
#include "resgas/csv.hpp"
#include "resgas/errors.hpp"
#include "resgas/eval.hpp"
#include "resgas/neural_gas.hpp"
#include "resgas/readout.hpp"
#include "resgas/snapshot.hpp"

namespace resgas {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
    std::string out_dir = "out";
    bool no_timestamp = false;
    bool verbose = false;
};

fs::path ensure_out_dir(const CommonOptions& common) {
    fs::path dir(common.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory: " + dir.string());
    return dir;
}

void log_line(const CommonOptions& common, const std::string& msg) {
    if (common.verbose) std::cerr << "[resgas] " << msg << "\n";
}

// ---------------------------------------------------------------- gen-data

struct GenDataOptions {
    std::string dataset;
    std::uint64_t seed = 1;
    int t_h = 1;
    long train_len = 10000;
    long test_len = 2000;
    int narma_order = 10;
    double mg_tau = 17.0;
};

int cmd_gen_data(const GenDataOptions& opt, const CommonOptions& common) {
    DatasetSpec spec;
    spec.name = opt.dataset;
    spec.t_h = opt.t_h;
    spec.train_len = opt.train_len;
    spec.test_len = opt.test_len;
    spec.narma.order = opt.narma_order;
    spec.mackey_glass.tau = opt.mg_tau;
    spec.validate();

    const fs::path dir = ensure_out_dir(common);
    const LabeledSequence raw = spec.generate(opt.seed);
    auto [train, test] = split(raw, spec.train_len, spec.test_len);
    std::tie(train, test) = rescale_sequences(std::move(train), std::move(test));

    write_text_file((dir / (opt.dataset + "-train.csv")).string(), sequence_csv(train));
    write_text_file((dir / (opt.dataset + "-test.csv")).string(), sequence_csv(test));
    write_sequence_cache((dir / (opt.dataset + "-cache.rgd")).string(), raw);

    std::ostringstream cfg;
    cfg << "[gen-data]\n"
        << "dataset = " << opt.dataset << "\n"
        << "seed = " << opt.seed << "\n"
        << "t_h = " << opt.t_h << "\n"
        << "train_len = " << opt.train_len << "\n"
        << "test_len = " << opt.test_len << "\n";
    if (opt.dataset == "narma") cfg << "order = " << opt.narma_order << "\n";
    if (opt.dataset == "mackey-glass") cfg << "tau = " << format_double(opt.mg_tau) << "\n";
    write_text_file((dir / "effective-config.ini").string(), cfg.str());

    log_line(common, "wrote " + opt.dataset + " train/test CSVs and cache to " +
                         dir.string());
    return kExitOk;
}

// --------------------------------------------------------------- run/sweep

struct RunOptions {
    std::string config_path;
    std::optional<long> seeds;
    std::optional<long> n;
    std::optional<int> t_h;
    std::optional<std::string> variant;
    std::optional<double> lambda_i;
    std::optional<double> lambda_f;
    bool force_grid = false;
    bool no_grid = false;
};

ExperimentSpec load_spec(const RunOptions& opt) {
    ConfigMap map;
    try {
        map = load_config_file(opt.config_path);
    } catch (const DataError& e) {
        throw ConfigError(std::string("cannot read config: ") + e.what());
    }
    ExperimentSpec spec = spec_from_config(map);

    if (opt.seeds) spec.seed_count = static_cast<int>(*opt.seeds);
    if (opt.n) spec.n = *opt.n;
    if (opt.t_h) spec.dataset.t_h = *opt.t_h;
    if (opt.variant) spec.model.kind = *opt.variant;
    if (opt.lambda_i) spec.pretrain.lambda_i = *opt.lambda_i;
    if (opt.lambda_f) spec.pretrain.lambda_f = *opt.lambda_f;
    if (opt.no_grid) spec.grid = GridSpec{};
    if (opt.force_grid && spec.grid.empty()) {
        throw ConfigError("--grid requested but the config defines no [grid] axes");
    }
    spec.validate();
    return spec;
}

void write_effective_config(const ExperimentSpec& spec, const fs::path& dir) {
    write_text_file((dir / "effective-config.ini").string(),
                    config_text_from_spec(spec));
}

// Snapshot + fitted readout record for the first seed of the (winning) spec.
void write_seed_artifacts(const ExperimentSpec& spec, RunResult& result,
                          const fs::path& dir) {
    const std::uint64_t seed = spec.seed_base;
    const auto [train, test] = prepare_splits(spec, seed);
    Eigen::MatrixXd v_train;
    const fs::path snap = dir / ("reservoir-seed" + std::to_string(seed) + ".rsnap");
    if (spec.model.is_esn()) {
        EsnReservoir r = build_esn(spec, seed, train);
        v_train = r.run(train.X);
        r.reset_state();
        save_snapshot(snap.string(), r);
    } else {
        RngReservoir r = build_rng(spec, seed, train);
        v_train = r.run(train.X);
        r.reset_state();
        save_snapshot(snap.string(), r);
    }
    StateTargetPair fit{std::move(v_train), train.y,
                        spec.washout_in_fit ? spec.washout : 0};
    const RidgeReadout readout = ridge_fit(fit, spec.model.mu, spec.model.readout_bias);
    nlohmann::json w = nlohmann::json::array();
    for (Eigen::Index i = 0; i < readout.w_out.size(); ++i) w.push_back(readout.w_out[i]);
    result.metadata["first_seed_readout"] = {{"seed", seed},
                                             {"mu", readout.mu},
                                             {"has_bias", readout.has_bias},
                                             {"w_out", w}};
}

void write_result_records(const RunResult& result, const fs::path& dir) {
    nlohmann::json j;
    j["seeds"] = result.seeds;
    j["nrmse_per_seed"] = result.nrmse_per_seed;
    j["nrmse_mean"] = result.mean;
    j["nrmse_var"] = result.variance;
    if (!result.best_grid_point.empty()) j["best_grid_point"] = result.best_grid_point;
    j["metadata"] = result.metadata;
    write_text_file((dir / "results.json").string(), j.dump(2) + "\n");
}

int cmd_run(const RunOptions& opt, const CommonOptions& common) {
    ExperimentSpec spec = load_spec(opt);
    const fs::path dir = ensure_out_dir(common);
    write_effective_config(spec, dir);

    RunResult result;
    ExperimentSpec winner = spec;
    if (!spec.grid.empty()) {
        log_line(common, "grid search over " + std::to_string(spec.grid.point_count()) +
                             " points");
        GridSearchResult g = grid_search(spec);
        result = std::move(g.result);
        // Re-resolve the winner spec for artifact emission.
        winner.grid = GridSpec{};
        winner.model = ModelSpec{};
        const auto& meta = result.metadata["spec"]["model"];
        winner.model.kind = meta["kind"].get<std::string>();
        winner.model.mu = meta["mu"].get<double>();
        winner.model.readout_bias = meta["readout_bias"].get<bool>();
        if (winner.model.is_esn()) {
            winner.model.esn_spectral_radius = meta["r"].get<double>();
            winner.model.esn_sparsity = meta["s"].get<double>();
            winner.model.esn_gamma = meta["gamma"].get<double>();
            winner.model.esn_input_scaling = meta["input_scaling"].get<double>();
        } else {
            winner.model.rng.alpha = meta["alpha"].get<double>();
            winner.model.rng.beta = meta["beta"].get<double>();
            winner.model.rng.beta_masked = meta["beta_masked"].get<double>();
            winner.model.rng.gamma = meta["gamma"].get<double>();
            winner.model.rng.eta = meta["eta"].get<double>();
        }
    } else {
        result = run_experiment(spec);
    }

    write_seed_artifacts(winner, result, dir);
    write_text_file((dir / "results.csv").string(),
                    results_csv({row_from_result(winner, result)}, !common.no_timestamp));
    write_result_records(result, dir);
    log_line(common, "nrmse mean " + format_double(result.mean));
    return kExitOk;
}

struct SweepOptions {
    std::string kind;
    std::string values;
};

int cmd_sweep(const RunOptions& run_opt, const SweepOptions& sweep_opt,
              const CommonOptions& common) {
    ExperimentSpec spec = load_spec(run_opt);
    const fs::path dir = ensure_out_dir(common);
    write_effective_config(spec, dir);

    std::vector<SweepRow> rows;
    if (sweep_opt.kind == "units") {
        std::vector<Eigen::Index> ns;
        for (double v : parse_double_list(sweep_opt.values)) {
            ns.push_back(static_cast<Eigen::Index>(std::llround(v)));
        }
        rows = sweep_units(spec, ns);
    } else if (sweep_opt.kind == "horizon") {
        std::vector<int> ths;
        for (double v : parse_double_list(sweep_opt.values)) {
            ths.push_back(static_cast<int>(std::llround(v)));
        }
        rows = sweep_horizon(spec, ths);
    } else if (sweep_opt.kind == "lambda") {
        // Value format: "li:lf,li:lf,..." e.g. "50:0.01,1:1,0:0".
        std::vector<std::pair<double, double>> regimes;
        std::stringstream ss(sweep_opt.values);
        std::string pair;
        while (std::getline(ss, pair, ',')) {
            const auto colon = pair.find(':');
            if (colon == std::string::npos) {
                throw ConfigError("lambda sweep values must be li:lf pairs");
            }
            regimes.emplace_back(std::stod(pair.substr(0, colon)),
                                 std::stod(pair.substr(colon + 1)));
        }
        if (regimes.empty()) throw ConfigError("sweep: empty value list");
        rows = sweep_lambda(spec, regimes);
    } else {
        throw ConfigError("unknown sweep kind: " + sweep_opt.kind);
    }

    write_text_file((dir / "results.csv").string(),
                    results_csv(rows, !common.no_timestamp));
    log_line(common, "wrote " + std::to_string(rows.size()) + " sweep rows");
    return kExitOk;
}

// --------------------------------------------------------------- demo-ring

struct RingOptions {
    int units = 100;
    long iters = 100000;
    double inner = 0.7;
    double outer = 1.0;
    double lambda_i = 8.0;
    double lambda_f = 0.1;
    double epsilon_i = 0.5;
    double epsilon_f = 0.005;
    std::uint64_t seed = 1;
    int checkpoints = 20;
};

int cmd_demo_ring(const RingOptions& opt, const CommonOptions& common) {
    RingDataset ring;
    ring.inner_radius = opt.inner;
    ring.outer_radius = opt.outer;

    const NgTrainConfig cfg(Schedule(opt.epsilon_i, opt.epsilon_f, opt.iters),
                            Schedule(opt.lambda_i, opt.lambda_f, opt.iters));
    const auto rows = ring_demo(ring, opt.units, cfg, opt.seed, opt.checkpoints);

    const fs::path dir = ensure_out_dir(common);
    write_text_file((dir / "ring-demo.csv").string(),
                    ring_demo_csv(rows, !common.no_timestamp));

    std::ostringstream cfg_echo;
    cfg_echo << "[demo-ring]\n"
             << "units = " << opt.units << "\n"
             << "iters = " << opt.iters << "\n"
             << "inner = " << format_double(opt.inner) << "\n"
             << "outer = " << format_double(opt.outer) << "\n"
             << "lambda_i = " << format_double(opt.lambda_i) << "\n"
             << "lambda_f = " << format_double(opt.lambda_f) << "\n"
             << "epsilon_i = " << format_double(opt.epsilon_i) << "\n"
             << "epsilon_f = " << format_double(opt.epsilon_f) << "\n"
             << "seed = " << opt.seed << "\n"
             << "checkpoints = " << opt.checkpoints << "\n";
    write_text_file((dir / "effective-config.ini").string(), cfg_echo.str());

    log_line(common, "final coverage " + format_double(rows.back().coverage));
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Reservoir computing benchmarks: neural-gas reservoirs vs ESN"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOptions common;
    app.add_option("--out", common.out_dir, "Output directory")->capture_default_str();
    app.add_flag("--no-timestamp", common.no_timestamp,
                 "Suppress the timestamp header in result CSVs");
    app.add_flag("-v,--verbose", common.verbose, "Log progress to stderr");

    GenDataOptions gen_opt;
    CLI::App* gen = app.add_subcommand("gen-data", "Generate train/test dataset files");
    gen->add_option("--dataset", gen_opt.dataset, "narma | mackey-glass | lorenz")
        ->required();
    gen->add_option("--seed", gen_opt.seed, "Base seed")->capture_default_str();
    gen->add_option("--th", gen_opt.t_h, "Prediction horizon (samples)")
        ->capture_default_str();
    gen->add_option("--train-len", gen_opt.train_len, "Training length")
        ->capture_default_str();
    gen->add_option("--test-len", gen_opt.test_len, "Test length")->capture_default_str();
    gen->add_option("--order", gen_opt.narma_order, "NARMA order")->capture_default_str();
    gen->add_option("--tau", gen_opt.mg_tau, "Mackey-Glass delay")->capture_default_str();

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "Run one experiment from a config file");
    run->add_option("--config", run_opt.config_path, "Experiment config file")->required();
    double lambda_i_val = 0.0, lambda_f_val = 0.0;
    long seeds_val = 0, n_val = 0;
    int th_val = 0;
    std::string variant_val;
    auto* seeds_flag = run->add_option("--seeds", seeds_val, "Override seed count");
    auto* n_flag = run->add_option("--n", n_val, "Override unit count");
    auto* th_flag = run->add_option("--th", th_val, "Override horizon");
    auto* variant_flag = run->add_option("--variant", variant_val, "Override model kind");
    auto* li_flag = run->add_option("--lambda-i", lambda_i_val, "Override lambda_i");
    auto* lf_flag = run->add_option("--lambda-f", lambda_f_val, "Override lambda_f");
    run->add_flag("--grid", run_opt.force_grid, "Require the config's grid search");
    run->add_flag("--no-grid", run_opt.no_grid, "Disable the config's grid search");

    SweepOptions sweep_opt;
    CLI::App* sweep = app.add_subcommand("sweep", "Sweep units, horizon, or lambda");
    sweep->add_option("kind", sweep_opt.kind, "units | horizon | lambda")->required();
    sweep->add_option("--config", run_opt.config_path, "Experiment config file")
        ->required();
    sweep->add_option("--values", sweep_opt.values,
                      "Comma list (units/horizon) or li:lf pairs (lambda)")
        ->required();
    auto* s_seeds_flag = sweep->add_option("--seeds", seeds_val, "Override seed count");
    auto* s_n_flag = sweep->add_option("--n", n_val, "Override unit count");
    auto* s_variant_flag =
        sweep->add_option("--variant", variant_val, "Override model kind");
    auto* s_th_flag = sweep->add_option("--th", th_val, "Override horizon");

    RingOptions ring_opt;
    CLI::App* ring = app.add_subcommand("demo-ring", "Neural-gas ring coverage demo");
    ring->add_option("--units", ring_opt.units, "Unit count")->capture_default_str();
    ring->add_option("--iters", ring_opt.iters, "Training iterations")
        ->capture_default_str();
    ring->add_option("--inner", ring_opt.inner, "Inner radius")->capture_default_str();
    ring->add_option("--outer", ring_opt.outer, "Outer radius")->capture_default_str();
    ring->add_option("--lambda-i", ring_opt.lambda_i, "Initial lambda")
        ->capture_default_str();
    ring->add_option("--lambda-f", ring_opt.lambda_f, "Final lambda")
        ->capture_default_str();
    ring->add_option("--epsilon-i", ring_opt.epsilon_i, "Initial epsilon")
        ->capture_default_str();
    ring->add_option("--epsilon-f", ring_opt.epsilon_f, "Final epsilon")
        ->capture_default_str();
    ring->add_option("--seed", ring_opt.seed, "Seed")->capture_default_str();
    ring->add_option("--checkpoints", ring_opt.checkpoints, "Checkpoint count")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (seeds_flag->count() || s_seeds_flag->count()) run_opt.seeds = seeds_val;
    if (n_flag->count() || s_n_flag->count()) run_opt.n = n_val;
    if (th_flag->count() || s_th_flag->count()) run_opt.t_h = th_val;
    if (variant_flag->count() || s_variant_flag->count()) run_opt.variant = variant_val;
    if (li_flag->count()) run_opt.lambda_i = lambda_i_val;
    if (lf_flag->count()) run_opt.lambda_f = lambda_f_val;

    try {
        if (gen->parsed()) return cmd_gen_data(gen_opt, common);
        if (run->parsed()) return cmd_run(run_opt, common);
        if (sweep->parsed()) return cmd_sweep(run_opt, sweep_opt, common);
        if (ring->parsed()) return cmd_demo_ring(ring_opt, common);
        throw ConfigError("no subcommand given");
    } catch (const ConfigError& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "error (data): " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error (numerical): " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace resgas
