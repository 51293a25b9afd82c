#include "folab/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace folab {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

Config Config::from_text(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(ln) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "jet_order") cfg.jet_order = std::stoi(val);
            else if (key == "eps_zero") cfg.eps_zero = std::stod(val);
            else if (key == "ode_tol") cfg.ode_tol = std::stod(val);
            else if (key == "q_max") cfg.q_max = std::stol(val);
            else if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "max_depth") cfg.max_depth = std::stoi(val);
            else throw std::invalid_argument("unknown config key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("config line " + std::to_string(ln) + ": bad value for " + key);
        }
    }
    if (cfg.jet_order < 2) throw std::invalid_argument("jet_order must be >= 2");
    if (cfg.eps_zero <= 0 || cfg.ode_tol <= 0) throw std::invalid_argument("tolerances must be positive");
    return cfg;
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

std::string Config::to_text() const {
    std::ostringstream out;
    out << "jet_order = " << jet_order << "\n";
    out << "eps_zero = " << eps_zero << "\n";
    out << "ode_tol = " << ode_tol << "\n";
    out << "q_max = " << q_max << "\n";
    out << "seed = " << seed << "\n";
    out << "max_depth = " << max_depth << "\n";
    return out.str();
}

} // namespace folab
