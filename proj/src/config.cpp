#include "pbb84/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pbb84::config {

using engine::Scenario;
using engine::SweepConfig;

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    auto end = s.find_last_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    double v = 0.0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config: key '" + key + "' expects true/false, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(value);
    while (std::getline(is, item, ',')) {
        std::istringstream inner(item);
        std::string word;
        while (inner >> word) out.push_back(parse_number(key, word));
    }
    if (out.empty()) throw ConfigError("config: key '" + key + "' expects a list of numbers");
    return out;
}

void apply_key(SweepConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "scenario") {
        cfg.scenario = engine::scenario_from_name(value);
    } else if (key == "optimize") {
        cfg.optimize = parse_bool(key, value);
    } else if (key == "link.alpha") {
        cfg.link.alpha_db_per_km = parse_number(key, value);
    } else if (key == "link.eta_bob") {
        cfg.link.eta_bob = parse_number(key, value);
    } else if (key == "link.eps_bob") {
        cfg.link.epsilon_bob = parse_number(key, value);
    } else if (key == "link.q") {
        cfg.link.q_efficiency = parse_number(key, value);
    } else if (key == "link.f_ec") {
        cfg.link.f_ec = parse_number(key, value);
    } else if (key == "grid.start") {
        cfg.grid_start_km = parse_number(key, value);
    } else if (key == "grid.stop") {
        cfg.grid_stop_km = parse_number(key, value);
    } else if (key == "grid.step") {
        cfg.grid_step_km = parse_number(key, value);
    } else if (key == "coherent.mu") {
        cfg.mu = parse_number(key, value);
    } else if (key == "coherent.omega") {
        cfg.omega = parse_number(key, value);
    } else if (key == "source.p") {
        cfg.dist = sps::SourceDistribution(parse_list(key, value));
    } else if (key == "source.eta_a") {
        cfg.eta_a = parse_number(key, value);
    } else if (key == "source.eps_a") {
        cfg.eps_a = parse_number(key, value);
    } else if (key == "source.t") {
        cfg.t = parse_number(key, value);
    } else if (key == "source.tau") {
        cfg.tau = parse_number(key, value);
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

} // namespace

SweepConfig apply_config_text(SweepConfig base, const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("config: malformed section header at line " +
                                  std::to_string(line_no));
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: expected key = value at line " + std::to_string(line_no));
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        apply_key(base, key, value);
    }
    return base;
}

SweepConfig load_config_file(SweepConfig base, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return apply_config_text(std::move(base), ss.str());
}

namespace {

SweepConfig defaults() {
    SweepConfig cfg;
    cfg.link = LinkParams{};   // alpha 0.2, eta_B 0.1, eps_B 1e-6, q 1/2, f 1.22
    cfg.eps_a = 1e-6;
    cfg.optimize = true;
    return cfg;
}

const sps::SourceDistribution kLowVacuum({0.0099, 0.9882, 0.0019});
const sps::SourceDistribution kHighVacuum({0.2, 0.785, 0.015});

SweepConfig sps_preset(Scenario scenario, const sps::SourceDistribution& dist, double eta_a,
                       double stop_km) {
    SweepConfig cfg = defaults();
    cfg.scenario = scenario;
    cfg.dist = dist;
    cfg.eta_a = eta_a;
    cfg.grid_stop_km = stop_km;
    return cfg;
}

} // namespace

SweepConfig preset(const std::string& name) {
    if (name == "coherent-passive" || name == "coherent-active" || name == "coherent-one-laser") {
        SweepConfig cfg = defaults();
        cfg.scenario = engine::scenario_from_name(name);
        cfg.grid_stop_km = 100.0;
        return cfg;
    }
    if (name == "sps-ideal-a100") return sps_preset(Scenario::SpsPassive, sps::SourceDistribution::ideal(), 1.0, 260.0);
    if (name == "sps-ideal-a50") return sps_preset(Scenario::SpsPassive, sps::SourceDistribution::ideal(), 0.5, 260.0);
    if (name == "sps-ideal-a10") return sps_preset(Scenario::SpsPassive, sps::SourceDistribution::ideal(), 0.1, 260.0);
    if (name == "sps-ideal-active") return sps_preset(Scenario::SpsActive, sps::SourceDistribution::ideal(), 1.0, 260.0);
    if (name == "sps-lowvac-a100") return sps_preset(Scenario::SpsPassive, kLowVacuum, 1.0, 260.0);
    if (name == "sps-lowvac-a50") return sps_preset(Scenario::SpsPassive, kLowVacuum, 0.5, 260.0);
    if (name == "sps-lowvac-a10") return sps_preset(Scenario::SpsPassive, kLowVacuum, 0.1, 260.0);
    if (name == "sps-lowvac-active") return sps_preset(Scenario::SpsActive, kLowVacuum, 1.0, 260.0);
    if (name == "sps-highvac-a100") return sps_preset(Scenario::SpsPassive, kHighVacuum, 1.0, 180.0);
    if (name == "sps-highvac-a50") return sps_preset(Scenario::SpsPassive, kHighVacuum, 0.5, 180.0);
    if (name == "sps-highvac-a10") return sps_preset(Scenario::SpsPassive, kHighVacuum, 0.1, 180.0);
    if (name == "sps-highvac-active") return sps_preset(Scenario::SpsActive, kHighVacuum, 1.0, 180.0);
    throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
    return {"coherent-passive", "coherent-active", "coherent-one-laser",
            "sps-ideal-a100",   "sps-ideal-a50",   "sps-ideal-a10",
            "sps-ideal-active", "sps-lowvac-a100", "sps-lowvac-a50",
            "sps-lowvac-a10",   "sps-lowvac-active", "sps-highvac-a100",
            "sps-highvac-a50",  "sps-highvac-a10", "sps-highvac-active"};
}

std::string to_config_text(const SweepConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "scenario = " << engine::scenario_name(cfg.scenario) << "\n";
    os << "optimize = " << (cfg.optimize ? "true" : "false") << "\n\n";
    os << "[link]\n";
    os << "alpha = " << cfg.link.alpha_db_per_km << "\n";
    os << "eta_bob = " << cfg.link.eta_bob << "\n";
    os << "eps_bob = " << cfg.link.epsilon_bob << "\n";
    os << "q = " << cfg.link.q_efficiency << "\n";
    os << "f_ec = " << cfg.link.f_ec << "\n\n";
    os << "[grid]\n";
    os << "start = " << cfg.grid_start_km << "\n";
    os << "stop = " << cfg.grid_stop_km << "\n";
    os << "step = " << cfg.grid_step_km << "\n\n";
    os << "[coherent]\n";
    os << "mu = " << cfg.mu << "\n";
    os << "omega = " << cfg.omega << "\n\n";
    os << "[source]\n";
    os << "p =";
    for (double p : cfg.dist.probs) os << ' ' << p;
    os << "\n";
    os << "eta_a = " << cfg.eta_a << "\n";
    os << "eps_a = " << cfg.eps_a << "\n";
    os << "t = " << cfg.t << "\n";
    os << "tau = " << cfg.tau << "\n";
    return os.str();
}

} // namespace pbb84::config
