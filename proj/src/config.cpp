#include "sinrcap/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace sinrcap {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("config: " + msg); }

std::string scenario_to_string(Scenario s) {
    return s == Scenario::ConstantPower ? "constant" : "heterogeneous";
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "constant") return Scenario::ConstantPower;
    if (s == "heterogeneous") return Scenario::HeterogeneousPower;
    fail("experiment.scenario must be \"constant\" or \"heterogeneous\", got \"" + s + "\"");
}

std::string capacity_mode_to_string(CapacityMode m) {
    return m == CapacityMode::ThresholdRate ? "threshold" : "gaussian";
}

CapacityMode capacity_mode_from_string(const std::string& s) {
    if (s == "threshold") return CapacityMode::ThresholdRate;
    if (s == "gaussian") return CapacityMode::GaussianRate;
    fail("sinr.mode must be \"threshold\" or \"gaussian\", got \"" + s + "\"");
}

std::string power_mode_to_string(PowerMode m) {
    switch (m) {
        case PowerMode::Constant: return "constant";
        case PowerMode::UniformContinuous: return "uniform";
        case PowerMode::TwoPointMixture: return "two_point";
    }
    fail("unrepresentable power mode");
}

PowerMode power_mode_from_string(const std::string& s) {
    if (s == "constant") return PowerMode::Constant;
    if (s == "uniform") return PowerMode::UniformContinuous;
    if (s == "two_point") return PowerMode::TwoPointMixture;
    fail("power.mode must be \"constant\", \"uniform\" or \"two_point\", got \"" + s + "\"");
}

// --- typed field readers with field-named errors -------------------------

void read_field(const json& sec, const char* section, const char* key, int& out) {
    const auto it = sec.find(key);
    if (it == sec.end()) return;
    if (!it->is_number_integer())
        fail(std::string(section) + "." + key + " must be an integer");
    out = it->get<int>();
}

void read_field(const json& sec, const char* section, const char* key, long long& out) {
    const auto it = sec.find(key);
    if (it == sec.end()) return;
    if (!it->is_number_integer())
        fail(std::string(section) + "." + key + " must be an integer");
    out = it->get<long long>();
}

void read_field(const json& sec, const char* section, const char* key, std::uint64_t& out) {
    const auto it = sec.find(key);
    if (it == sec.end()) return;
    if (!it->is_number_integer() || (it->is_number_integer() && it->get<long long>() < 0 &&
                                     !it->is_number_unsigned()))
        fail(std::string(section) + "." + key + " must be a non-negative integer");
    out = it->get<std::uint64_t>();
}

void read_field(const json& sec, const char* section, const char* key, double& out) {
    const auto it = sec.find(key);
    if (it == sec.end()) return;
    if (!it->is_number())
        fail(std::string(section) + "." + key + " must be a number");
    out = it->get<double>();
}

void read_field(const json& sec, const char* section, const char* key, bool& out) {
    const auto it = sec.find(key);
    if (it == sec.end()) return;
    if (!it->is_boolean())
        fail(std::string(section) + "." + key + " must be a boolean");
    out = it->get<bool>();
}

void read_field(const json& sec, const char* section, const char* key, std::string& out) {
    const auto it = sec.find(key);
    if (it == sec.end()) return;
    if (!it->is_string())
        fail(std::string(section) + "." + key + " must be a string");
    out = it->get<std::string>();
}

void check_keys(const json& sec, const char* section,
                std::initializer_list<const char*> allowed) {
    if (!sec.is_object()) fail(std::string(section) + " must be a JSON object");
    std::unordered_set<std::string> ok;
    for (const char* k : allowed) ok.insert(k);
    for (const auto& item : sec.items()) {
        if (ok.find(item.key()) == ok.end())
            fail(std::string("unknown key ") + section + "." + item.key());
    }
}

}  // namespace

json run_config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["experiment"] = {
        {"scenario", scenario_to_string(cfg.scenario)},
        {"n", cfg.n},
        {"m", cfg.m},
        {"l", cfg.l},
        {"k", cfg.k},
        {"trials", cfg.trials},
        {"base_seed", cfg.base_seed},
        {"alpha_exponent", cfg.alpha_exponent},
        {"eta", cfg.eta},
        {"epsilon", cfg.epsilon},
        {"include_other_destinations_as_relays", cfg.include_other_destinations_as_relays},
        {"threads", cfg.threads},
    };
    j["sinr"] = {
        {"N0", cfg.sinr.N0},
        {"beta", cfg.sinr.beta},
        {"gamma", cfg.sinr.gamma},
        {"R", cfg.sinr.R},
        {"mode", capacity_mode_to_string(cfg.sinr.mode)},
    };
    j["loss"] = {
        {"c", cfg.loss.c},
        {"alpha", cfg.loss.alpha},
        {"d_near", cfg.loss.d_near},
    };
    j["power"] = {
        {"mode", power_mode_to_string(cfg.power.mode)},
        {"p0", cfg.power.p0},
        {"p_min", cfg.power.p_min},
        {"p_max", cfg.power.p_max},
        {"w_min", cfg.power.w_min},
    };
    j["scaling"] = {
        {"enabled", cfg.scaling.enabled},
        {"exponent", cfg.scaling.exponent},
        {"reference_n", cfg.scaling.reference_n},
    };
    j["estimation"] = {
        {"samples", cfg.estimation.samples},
        {"seed", cfg.estimation.seed},
    };
    return j;
}

ExperimentConfig run_config_from_json(const json& j) {
    if (!j.is_object()) fail("top level must be a JSON object");
    for (const auto& item : j.items()) {
        static const std::unordered_set<std::string> sections = {
            "schema_version", "experiment", "sinr", "loss", "power", "scaling", "estimation"};
        if (sections.find(item.key()) == sections.end())
            fail("unknown top-level key \"" + item.key() + "\"");
    }
    if (j.contains("schema_version")) {
        if (!j["schema_version"].is_number_integer())
            fail("schema_version must be an integer");
        const int v = j["schema_version"].get<int>();
        if (v != kConfigSchemaVersion)
            fail("unsupported schema_version " + std::to_string(v) + " (expected " +
                 std::to_string(kConfigSchemaVersion) + ")");
    }

    ExperimentConfig cfg;  // defaults

    if (j.contains("experiment")) {
        const json& e = j["experiment"];
        check_keys(e, "experiment",
                   {"scenario", "n", "m", "l", "k", "trials", "base_seed", "alpha_exponent",
                    "eta", "epsilon", "include_other_destinations_as_relays", "threads"});
        std::string scen = scenario_to_string(cfg.scenario);
        read_field(e, "experiment", "scenario", scen);
        cfg.scenario = scenario_from_string(scen);
        read_field(e, "experiment", "n", cfg.n);
        read_field(e, "experiment", "m", cfg.m);
        read_field(e, "experiment", "l", cfg.l);
        read_field(e, "experiment", "k", cfg.k);
        read_field(e, "experiment", "trials", cfg.trials);
        read_field(e, "experiment", "base_seed", cfg.base_seed);
        read_field(e, "experiment", "alpha_exponent", cfg.alpha_exponent);
        read_field(e, "experiment", "eta", cfg.eta);
        read_field(e, "experiment", "epsilon", cfg.epsilon);
        read_field(e, "experiment", "include_other_destinations_as_relays",
                   cfg.include_other_destinations_as_relays);
        read_field(e, "experiment", "threads", cfg.threads);
    }
    if (j.contains("sinr")) {
        const json& s = j["sinr"];
        check_keys(s, "sinr", {"N0", "beta", "gamma", "R", "mode"});
        read_field(s, "sinr", "N0", cfg.sinr.N0);
        read_field(s, "sinr", "beta", cfg.sinr.beta);
        read_field(s, "sinr", "gamma", cfg.sinr.gamma);
        read_field(s, "sinr", "R", cfg.sinr.R);
        std::string mode = capacity_mode_to_string(cfg.sinr.mode);
        read_field(s, "sinr", "mode", mode);
        cfg.sinr.mode = capacity_mode_from_string(mode);
    }
    if (j.contains("loss")) {
        const json& lo = j["loss"];
        check_keys(lo, "loss", {"c", "alpha", "d_near"});
        read_field(lo, "loss", "c", cfg.loss.c);
        read_field(lo, "loss", "alpha", cfg.loss.alpha);
        read_field(lo, "loss", "d_near", cfg.loss.d_near);
    }
    if (j.contains("power")) {
        const json& p = j["power"];
        check_keys(p, "power", {"mode", "p0", "p_min", "p_max", "w_min"});
        std::string mode = power_mode_to_string(cfg.power.mode);
        read_field(p, "power", "mode", mode);
        cfg.power.mode = power_mode_from_string(mode);
        read_field(p, "power", "p0", cfg.power.p0);
        read_field(p, "power", "p_min", cfg.power.p_min);
        read_field(p, "power", "p_max", cfg.power.p_max);
        read_field(p, "power", "w_min", cfg.power.w_min);
    }
    if (j.contains("scaling")) {
        const json& s = j["scaling"];
        check_keys(s, "scaling", {"enabled", "exponent", "reference_n"});
        read_field(s, "scaling", "enabled", cfg.scaling.enabled);
        read_field(s, "scaling", "exponent", cfg.scaling.exponent);
        read_field(s, "scaling", "reference_n", cfg.scaling.reference_n);
    }
    if (j.contains("estimation")) {
        const json& e = j["estimation"];
        check_keys(e, "estimation", {"samples", "seed"});
        read_field(e, "estimation", "samples", cfg.estimation.samples);
        read_field(e, "estimation", "seed", cfg.estimation.seed);
    }
    return cfg;
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file \"" + path + "\"");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        fail("parse error in \"" + path + "\": " + e.what());
    }
    return j;
}

std::vector<std::string> preset_names() { return {"fig3", "fig5"}; }

bool is_preset(const std::string& name) {
    for (const auto& p : preset_names())
        if (p == name) return true;
    return false;
}

json preset_config(const std::string& name) {
    ExperimentConfig cfg;  // defaults equal the constant-power baseline
    if (name == "fig3") {
        cfg.scenario = Scenario::ConstantPower;
        cfg.power.mode = PowerMode::Constant;
    } else if (name == "fig5") {
        cfg.scenario = Scenario::HeterogeneousPower;
        cfg.power.mode = PowerMode::UniformContinuous;
        cfg.power.p_min = 0.01;
        cfg.power.p_max = 0.02;
    } else {
        fail("unknown preset \"" + name + "\" (available: fig3, fig5)");
    }
    return run_config_to_json(cfg);
}

std::string preset_summary(const std::string& name) {
    if (name == "fig3")
        return "constant transmit power 0.01, n=2000 nodes, 200 relays, cut size 50, "
               "200 trials";
    if (name == "fig5")
        return "uniform transmit power on [0.01,0.02], n=2000 nodes, 200 relays, "
               "cut size 50, 200 trials";
    fail("unknown preset \"" + name + "\"");
}

void apply_override(json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        fail("override must look like section.key=value, got \"" + assignment + "\"");
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    std::vector<std::string> parts;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '.')) {
        if (part.empty()) fail("empty path component in override \"" + assignment + "\"");
        parts.push_back(part);
    }
    if (parts.empty()) fail("empty path in override \"" + assignment + "\"");

    json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) parsed = value;  // fall back to a bare string

    json* node = &j;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        node = &(*node)[parts[i]];
        if (!node->is_object() && !node->is_null())
            fail("override path \"" + path + "\" descends into a non-object");
    }
    (*node)[parts.back()] = parsed;
}

}  // namespace sinrcap
