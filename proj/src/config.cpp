#include "resgas/config.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "resgas/csv.hpp"
#include "resgas/errors.hpp"

namespace resgas {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap map;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        const std::string full = section.empty() ? key : section + "." + key;
        if (map.count(full)) {
            throw ConfigError("config: duplicate key " + full);
        }
        map[full] = value;
    }
    return map;
}

ConfigMap load_config_file(const std::string& path) {
    return parse_config_text(read_text_file(path));
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell = trim(cell);
        if (cell.empty()) continue;
        try {
            std::size_t used = 0;
            const double v = std::stod(cell, &used);
            if (used != cell.size()) throw std::invalid_argument("trailing");
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("bad numeric list entry: " + cell);
        }
    }
    if (out.empty()) throw ConfigError("empty numeric list");
    return out;
}

namespace {

class ConfigReader {
public:
    explicit ConfigReader(const ConfigMap& map) : map_(map) {}

    bool has(const std::string& key) {
        seen_.insert(key);
        return map_.count(key) > 0;
    }
    std::string str(const std::string& key, const std::string& fallback) {
        seen_.insert(key);
        const auto it = map_.find(key);
        return it == map_.end() ? fallback : it->second;
    }
    double num(const std::string& key, double fallback) {
        seen_.insert(key);
        const auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        try {
            std::size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config: bad numeric value for " + key + ": " + it->second);
        }
    }
    long integer(const std::string& key, long fallback) {
        const double v = num(key, static_cast<double>(fallback));
        const auto r = static_cast<long>(std::llround(v));
        if (static_cast<double>(r) != v) {
            throw ConfigError("config: expected integer for " + key);
        }
        return r;
    }
    bool boolean(const std::string& key, bool fallback) {
        seen_.insert(key);
        const auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
        if (it->second == "false" || it->second == "0" || it->second == "no") return false;
        throw ConfigError("config: bad boolean for " + key + ": " + it->second);
    }

    // Everything under [grid] except the protocol settings is an axis.
    std::vector<std::pair<std::string, std::vector<double>>> grid_axes() {
        std::vector<std::pair<std::string, std::vector<double>>> axes;
        for (const auto& [key, value] : map_) {
            if (key.rfind("grid.", 0) != 0) continue;
            seen_.insert(key);
            const std::string name = key.substr(5);
            if (name == "enabled" || name == "seed_count" || name == "validation_len") {
                continue;
            }
            axes.emplace_back(name, parse_double_list(value));
        }
        return axes;
    }

    void reject_unknown() const {
        for (const auto& [key, value] : map_) {
            if (!seen_.count(key)) throw ConfigError("config: unknown key " + key);
        }
    }

private:
    const ConfigMap& map_;
    std::set<std::string> seen_;
};

}  // namespace

ExperimentSpec spec_from_config(const ConfigMap& config) {
    ConfigReader r(config);
    ExperimentSpec spec;

    spec.dataset.name = r.str("experiment.dataset", "narma");
    spec.model.kind = r.str("experiment.variant", "esn");
    spec.n = r.integer("experiment.n", 100);
    spec.dataset.t_h = static_cast<int>(r.integer("experiment.t_h", 1));
    spec.washout = r.integer("experiment.washout", 100);
    spec.warm_len = r.integer("experiment.warm_len", 100);
    spec.seed_base = static_cast<std::uint64_t>(r.integer("experiment.seed_base", 1));
    spec.seed_count = static_cast<int>(r.integer("experiment.seed_count", 50));
    spec.dataset.train_len = r.integer("experiment.train_len", 10000);
    spec.dataset.test_len = r.integer("experiment.test_len", 2000);
    spec.washout_in_fit = r.boolean("experiment.washout_in_fit", true);

    spec.dataset.narma.order = static_cast<int>(r.integer("dataset.order", 10));
    spec.dataset.narma.delta = r.num("dataset.delta", 0.1);
    spec.dataset.mackey_glass.tau = r.num("dataset.tau", 17.0);
    spec.dataset.mackey_glass.dt = r.num("dataset.dt_mackey_glass", 0.005);
    spec.dataset.mackey_glass.sample_every =
        r.num("dataset.sample_every_mackey_glass", spec.dataset.mackey_glass.sample_every);
    spec.dataset.mackey_glass.warmup = r.num("dataset.warmup_mackey_glass", 1000.0);
    spec.dataset.lorenz.dt = r.num("dataset.dt_lorenz", 0.005);
    spec.dataset.lorenz.warmup = r.num("dataset.warmup_lorenz", 10.0);

    spec.model.rng.alpha = r.num("model.alpha", 1.0);
    spec.model.rng.beta = r.num("model.beta", 1.0);
    spec.model.rng.beta_masked = r.num("model.beta_masked", spec.model.rng.beta);
    spec.model.esn_spectral_radius = r.num("model.r", 0.9);
    spec.model.esn_sparsity = r.num("model.s", 0.0);
    spec.model.esn_input_scaling = r.num("model.input_scaling", 1.0);
    const double gamma = r.num("model.gamma", 1.0);
    spec.model.rng.gamma = gamma;
    spec.model.esn_gamma = gamma;
    spec.model.rng.eta = r.num("model.eta", 0.0);
    spec.model.mu = r.num("model.mu", 1e-6);
    spec.model.readout_bias = r.boolean("model.readout_bias", false);

    spec.pretrain.epsilon_i = r.num("pretrain.epsilon_i", 0.5);
    spec.pretrain.epsilon_f = r.num("pretrain.epsilon_f", 0.005);
    spec.pretrain.lambda_i = r.num("pretrain.lambda_i", 50.0);
    spec.pretrain.lambda_f = r.num("pretrain.lambda_f", 0.01);
    spec.pretrain.passes = static_cast<int>(r.integer("pretrain.passes", 1));

    spec.grid_seed_count = static_cast<int>(r.integer("grid.seed_count", 5));
    spec.grid_val_len = r.integer("grid.validation_len", 2000);
    const bool grid_enabled = r.boolean("grid.enabled", false);
    auto axes = r.grid_axes();
    if (grid_enabled) {
        if (axes.empty()) throw ConfigError("config: grid enabled but no axes given");
        spec.grid.axes = std::move(axes);
    }

    r.reject_unknown();
    spec.validate();
    return spec;
}

std::string config_text_from_spec(const ExperimentSpec& spec) {
    std::ostringstream os;
    os << "[experiment]\n";
    os << "dataset = " << spec.dataset.name << "\n";
    os << "variant = " << spec.model.kind << "\n";
    os << "n = " << spec.n << "\n";
    os << "t_h = " << spec.dataset.t_h << "\n";
    os << "washout = " << spec.washout << "\n";
    os << "warm_len = " << spec.warm_len << "\n";
    os << "seed_base = " << spec.seed_base << "\n";
    os << "seed_count = " << spec.seed_count << "\n";
    os << "train_len = " << spec.dataset.train_len << "\n";
    os << "test_len = " << spec.dataset.test_len << "\n";
    os << "washout_in_fit = " << (spec.washout_in_fit ? "true" : "false") << "\n";

    os << "\n[dataset]\n";
    if (spec.dataset.name == "narma") {
        os << "order = " << spec.dataset.narma.order << "\n";
        os << "delta = " << format_double(spec.dataset.narma.delta) << "\n";
    } else if (spec.dataset.name == "mackey-glass") {
        os << "tau = " << format_double(spec.dataset.mackey_glass.tau) << "\n";
        os << "dt_mackey_glass = " << format_double(spec.dataset.mackey_glass.dt) << "\n";
        os << "sample_every_mackey_glass = "
           << format_double(spec.dataset.mackey_glass.sample_every) << "\n";
        os << "warmup_mackey_glass = "
           << format_double(spec.dataset.mackey_glass.warmup) << "\n";
    } else {
        os << "dt_lorenz = " << format_double(spec.dataset.lorenz.dt) << "\n";
        os << "warmup_lorenz = " << format_double(spec.dataset.lorenz.warmup) << "\n";
    }

    os << "\n[model]\n";
    if (spec.model.is_esn()) {
        os << "r = " << format_double(spec.model.esn_spectral_radius) << "\n";
        os << "s = " << format_double(spec.model.esn_sparsity) << "\n";
        os << "gamma = " << format_double(spec.model.esn_gamma) << "\n";
        os << "input_scaling = " << format_double(spec.model.esn_input_scaling) << "\n";
    } else {
        os << "alpha = " << format_double(spec.model.rng.alpha) << "\n";
        os << "beta = " << format_double(spec.model.rng.beta) << "\n";
        os << "beta_masked = " << format_double(spec.model.rng.beta_masked) << "\n";
        os << "gamma = " << format_double(spec.model.rng.gamma) << "\n";
        os << "eta = " << format_double(spec.model.rng.eta) << "\n";
    }
    os << "mu = " << format_double(spec.model.mu) << "\n";
    os << "readout_bias = " << (spec.model.readout_bias ? "true" : "false") << "\n";

    if (!spec.model.is_esn()) {
        os << "\n[pretrain]\n";
        os << "epsilon_i = " << format_double(spec.pretrain.epsilon_i) << "\n";
        os << "epsilon_f = " << format_double(spec.pretrain.epsilon_f) << "\n";
        os << "lambda_i = " << format_double(spec.pretrain.lambda_i) << "\n";
        os << "lambda_f = " << format_double(spec.pretrain.lambda_f) << "\n";
        os << "passes = " << spec.pretrain.passes << "\n";
    }

    if (!spec.grid.empty()) {
        os << "\n[grid]\n";
        os << "enabled = true\n";
        os << "seed_count = " << spec.grid_seed_count << "\n";
        os << "validation_len = " << spec.grid_val_len << "\n";
        for (const auto& [name, values] : spec.grid.axes) {
            os << name << " = ";
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (i > 0) os << ",";
                os << format_double(values[i]);
            }
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace resgas
