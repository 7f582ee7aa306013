#include "qkr/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qkr/errors.hpp"

namespace qkr {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& path) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + (path.empty() ? key : path + "." + key) + "'");
}

double get_number(const json& obj, const std::string& key, const std::string& path,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw ConfigError("'" + path + key + "' must be a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& key, const std::string& path,
            int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer())
        throw ConfigError("'" + path + key + "' must be an integer");
    return obj[key].get<int>();
}

GridSpec parse_grid(const json& obj, const std::string& path, GridSpec fallback) {
    reject_unknown(obj, {"start", "stop", "step"}, path);
    GridSpec grid;
    grid.start = get_number(obj, "start", path + ".", fallback.start);
    grid.stop = get_number(obj, "stop", path + ".", fallback.stop);
    grid.step = get_number(obj, "step", path + ".", fallback.step);
    if (!(grid.step > 0.0)) throw ConfigError("'" + path + ".step' must be > 0");
    if (grid.stop < grid.start) throw ConfigError("'" + path + ".stop' must be >= start");
    return grid;
}

MoleculeSpec parse_molecule(const json& value) {
    if (value.is_string()) return molecule_by_name(value.get<std::string>());
    if (!value.is_object()) throw ConfigError("'molecule' must be a name or an object");
    reject_unknown(value, {"name", "B_cm", "spin_weight_even", "spin_weight_odd",
                           "polarizability_anisotropy_A3"},
                   "molecule");
    MoleculeSpec mol;
    mol.name = value.value("name", "custom");
    mol.B_cm = get_number(value, "B_cm", "molecule.", 0.0);
    mol.spin_weight_even = get_number(value, "spin_weight_even", "molecule.", 0.0);
    mol.spin_weight_odd = get_number(value, "spin_weight_odd", "molecule.", 0.0);
    if (value.contains("polarizability_anisotropy_A3"))
        mol.polarizability_anisotropy_A3 =
            get_number(value, "polarizability_anisotropy_A3", "molecule.", 0.0);
    try {
        mol.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("molecule: ") + e.what());
    }
    return mol;
}

ExperimentConfig parse_json(const json& root) {
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown(root, {"molecule", "temperature_K", "weight_cutoff", "basis", "train",
                          "model", "scan", "initial", "seed"},
                   "");

    ExperimentConfig config;
    if (root.contains("molecule")) config.molecule = parse_molecule(root["molecule"]);
    config.temperature_K = get_number(root, "temperature_K", "", config.temperature_K);
    config.weight_cutoff = get_number(root, "weight_cutoff", "", config.weight_cutoff);
    if (root.contains("seed")) {
        if (!root["seed"].is_number_integer() || root["seed"].get<long long>() < 0)
            throw ConfigError("'seed' must be a non-negative integer");
        config.seed = root["seed"].get<std::uint64_t>();
    }

    if (root.contains("basis")) {
        const auto& b = root["basis"];
        reject_unknown(b, {"j_max", "leak_threshold"}, "basis");
        config.basis.j_max = get_int(b, "j_max", "basis.", config.basis.j_max);
        config.basis.leak_threshold =
            get_number(b, "leak_threshold", "basis.", config.basis.leak_threshold);
    }

    if (root.contains("train")) {
        const auto& t = root["train"];
        reject_unknown(t, {"n_pre", "period_pre", "delay", "delay_2", "n_loc",
                           "period_loc", "strength", "strength_pre"},
                       "train");
        config.train.n_pre = get_int(t, "n_pre", "train.", config.train.n_pre);
        config.train.period_pre = get_number(t, "period_pre", "train.", config.train.period_pre);
        config.train.delay = get_number(t, "delay", "train.", config.train.delay);
        config.train.delay_2 = get_number(t, "delay_2", "train.", config.train.delay_2);
        config.train.n_loc = get_int(t, "n_loc", "train.", config.train.n_loc);
        config.train.period_loc = get_number(t, "period_loc", "train.", config.train.period_loc);
        config.train.strength = get_number(t, "strength", "train.", config.train.strength);
        if (t.contains("strength_pre"))
            config.train.strength_pre = get_number(t, "strength_pre", "train.", 0.0);
    }

    if (root.contains("model")) {
        const auto& m = root["model"];
        reject_unknown(m, {"delta_kick", "fwhm", "dt"}, "model");
        if (m.contains("delta_kick")) {
            if (!m["delta_kick"].is_boolean())
                throw ConfigError("'model.delta_kick' must be a boolean");
            config.model.delta_kick = m["delta_kick"].get<bool>();
        }
        config.model.fwhm = get_number(m, "fwhm", "model.", config.model.fwhm);
        config.model.dt = get_number(m, "dt", "model.", config.model.dt);
    }

    if (root.contains("scan")) {
        const auto& s = root["scan"];
        reject_unknown(s, {"delay_grid", "period_grid", "period_loc_values", "optimize",
                           "optimize_grid", "tau_p_pairs", "n_kicks",
                           "classical_trajectories"},
                       "scan");
        if (s.contains("delay_grid"))
            config.scan.delay_grid = parse_grid(s["delay_grid"], "scan.delay_grid",
                                                config.scan.delay_grid);
        if (s.contains("period_grid"))
            config.scan.period_grid = parse_grid(s["period_grid"], "scan.period_grid",
                                                 config.scan.period_grid);
        if (s.contains("period_loc_values")) {
            if (!s["period_loc_values"].is_array())
                throw ConfigError("'scan.period_loc_values' must be an array");
            config.scan.period_loc_values = s["period_loc_values"].get<std::vector<double>>();
        }
        if (s.contains("optimize")) {
            if (!s["optimize"].is_boolean())
                throw ConfigError("'scan.optimize' must be a boolean");
            config.scan.optimize = s["optimize"].get<bool>();
        }
        if (s.contains("optimize_grid"))
            config.scan.optimize_grid = parse_grid(s["optimize_grid"], "scan.optimize_grid",
                                                   config.scan.optimize_grid);
        if (s.contains("tau_p_pairs")) {
            if (!s["tau_p_pairs"].is_array())
                throw ConfigError("'scan.tau_p_pairs' must be an array of [tau, P] pairs");
            config.scan.tau_p_pairs.clear();
            for (const auto& pair : s["tau_p_pairs"]) {
                if (!pair.is_array() || pair.size() != 2)
                    throw ConfigError("'scan.tau_p_pairs' entries must be [tau, P]");
                config.scan.tau_p_pairs.emplace_back(pair[0].get<double>(),
                                                     pair[1].get<double>());
            }
        }
        config.scan.n_kicks = get_int(s, "n_kicks", "scan.", config.scan.n_kicks);
        config.scan.classical_trajectories =
            get_int(s, "classical_trajectories", "scan.", config.scan.classical_trajectories);
    }

    if (root.contains("initial")) {
        const auto& i = root["initial"];
        if (i.is_string()) {
            if (i.get<std::string>() != "thermal")
                throw ConfigError("'initial' must be \"thermal\" or {j0, m0}");
        } else if (i.is_object()) {
            reject_unknown(i, {"j0", "m0"}, "initial");
            const int j0 = get_int(i, "j0", "initial.", 0);
            const int m0 = get_int(i, "m0", "initial.", 0);
            if (j0 < 0 || std::abs(m0) > j0)
                throw ConfigError("'initial' requires 0 <= |m0| <= j0");
            config.initial_pure = {j0, m0};
        } else {
            throw ConfigError("'initial' must be \"thermal\" or {j0, m0}");
        }
    }

    try {
        config.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return config;
}

} // namespace

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_string(buffer.str());
}

ExperimentConfig parse_config_string(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_json(root);
}

std::string config_to_json(const ExperimentConfig& config) {
    json root;
    root["molecule"] = {
        {"name", config.molecule.name},
        {"B_cm", config.molecule.B_cm},
        {"spin_weight_even", config.molecule.spin_weight_even},
        {"spin_weight_odd", config.molecule.spin_weight_odd},
    };
    if (config.molecule.polarizability_anisotropy_A3)
        root["molecule"]["polarizability_anisotropy_A3"] =
            *config.molecule.polarizability_anisotropy_A3;
    root["temperature_K"] = config.temperature_K;
    root["weight_cutoff"] = config.weight_cutoff;
    root["basis"] = {{"j_max", config.basis.j_max},
                     {"leak_threshold", config.basis.leak_threshold}};
    root["train"] = {{"n_pre", config.train.n_pre},
                     {"period_pre", config.train.period_pre},
                     {"delay", config.train.delay},
                     {"delay_2", config.train.delay_2},
                     {"n_loc", config.train.n_loc},
                     {"period_loc", config.train.period_loc},
                     {"strength", config.train.strength}};
    if (config.train.strength_pre)
        root["train"]["strength_pre"] = *config.train.strength_pre;
    root["model"] = {{"delta_kick", config.model.delta_kick},
                     {"fwhm", config.model.fwhm},
                     {"dt", config.model.dt}};
    auto grid = [](const GridSpec& g) {
        return json{{"start", g.start}, {"stop", g.stop}, {"step", g.step}};
    };
    root["scan"] = {{"delay_grid", grid(config.scan.delay_grid)},
                    {"period_grid", grid(config.scan.period_grid)},
                    {"period_loc_values", config.scan.period_loc_values},
                    {"optimize", config.scan.optimize},
                    {"optimize_grid", grid(config.scan.optimize_grid)},
                    {"n_kicks", config.scan.n_kicks},
                    {"classical_trajectories", config.scan.classical_trajectories}};
    json pairs = json::array();
    for (const auto& [tau, p] : config.scan.tau_p_pairs) pairs.push_back({tau, p});
    root["scan"]["tau_p_pairs"] = pairs;
    if (config.initial_pure)
        root["initial"] = {{"j0", config.initial_pure->first},
                           {"m0", config.initial_pure->second}};
    root["seed"] = config.seed;
    return root.dump(2);
}

} // namespace qkr
