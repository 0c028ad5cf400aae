// Line-oriented `[section] key = value` configuration with fail-closed
// validation.
#ifndef THPF_CONFIG_HPP
#define THPF_CONFIG_HPP

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

#include "thpf/constitutive.hpp"
#include "thpf/grid.hpp"

namespace thpf {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    // [grid]
    int nx = 64, ny = 64;
    double lx = 2.0 * M_PI, ly = 2.0 * M_PI;
    // [physics]
    double epsilon = 1.0, beta = 2.0, delta = 0.75;
    double nu0 = 0.05, nu1 = 0.1, stab = 2.0;
    // [time]
    double dt = 1e-3, t_final = 0.5, cfl = 0.25;
    // [initial]
    std::string scenario = "spinodal";
    double m0 = 0.0, amplitude = 0.1, theta0 = 1.0, radius = 1.0;
    std::uint64_t seed = 42;
    // [output]
    std::string dir = "out";
    int snap_every = 50;
    std::string diag_file = "diagnostics.csv";

    // not part of the on-disk format; set programmatically when a run must
    // keep every snapshot in memory for the weak-form audits
    bool store_states = false;

    Params params() const {
        Params p;
        p.epsilon = epsilon;
        p.beta = beta;
        p.delta = delta;
        p.nu0 = nu0;
        p.nu1 = nu1;
        p.nu_lo = nu0;
        p.nu_hi = nu0 + nu1;
        p.stab = stab;
        return p;
    }

    Grid grid() const { return Grid(nx, ny, lx, ly); }

    void validate() const {
        try {
            params().validate();
        } catch (const domain_error& e) {
            throw config_error(e.what());
        }
        if (nx < 4 || ny < 4 || nx % 2 || ny % 2)
            throw config_error("grid: nx, ny must be even and >= 4");
        if (!(lx > 0) || !(ly > 0)) throw config_error("grid: lx, ly must be positive");
        if (!(dt > 0)) throw config_error("time: dt must be positive");
        if (t_final < 0) throw config_error("time: t_final must be nonnegative");
        if (!(cfl > 0)) throw config_error("time: cfl must be positive");
        if (!(theta0 > 0)) throw config_error("initial: theta0 must be positive");
        if (radius < 0) throw config_error("initial: radius must be nonnegative");
        if (snap_every < 1) throw config_error("output: snap_every must be >= 1");
        if (scenario != "spinodal" && scenario != "bubble" && scenario != "shear" &&
            scenario != "manufactured")
            throw config_error("initial: unknown scenario '" + scenario + "'");
    }

    std::string fingerprint() const {
        std::ostringstream os;
        os.precision(17);
        os << nx << "x" << ny << ";l=" << lx << "," << ly << ";eps=" << epsilon
           << ";beta=" << beta << ";delta=" << delta << ";nu=" << nu0 << "+" << nu1
           << ";S=" << stab << ";dt=" << dt << ";T=" << t_final << ";cfl=" << cfl
           << ";" << scenario << ";m0=" << m0 << ";amp=" << amplitude
           << ";th0=" << theta0 << ";r=" << radius << ";seed=" << seed;
        return os.str();
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_num(const std::string& v, int line) {
    size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (...) {
        throw config_error("line " + std::to_string(line) + ": not a number: '" + v + "'");
    }
    if (pos != v.size())
        throw config_error("line " + std::to_string(line) + ": trailing junk: '" + v + "'");
    return x;
}

}  // namespace detail

/// Parse and fully validate; unknown sections or keys are errors.
inline Config parse_config(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("line " + std::to_string(ln) + ": malformed section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "grid" && section != "physics" && section != "time" &&
                section != "initial" && section != "output")
                throw config_error("line " + std::to_string(ln) + ": unknown section [" +
                                   section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(ln) + ": expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw config_error("line " + std::to_string(ln) + ": empty key or value");
        auto num = [&] { return detail::parse_num(val, ln); };
        bool known = true;
        if (section == "grid") {
            if (key == "nx") cfg.nx = static_cast<int>(num());
            else if (key == "ny") cfg.ny = static_cast<int>(num());
            else if (key == "lx") cfg.lx = num();
            else if (key == "ly") cfg.ly = num();
            else known = false;
        } else if (section == "physics") {
            if (key == "epsilon") cfg.epsilon = num();
            else if (key == "beta") cfg.beta = num();
            else if (key == "delta") cfg.delta = num();
            else if (key == "nu0") cfg.nu0 = num();
            else if (key == "nu1") cfg.nu1 = num();
            else if (key == "stab") cfg.stab = num();
            else known = false;
        } else if (section == "time") {
            if (key == "dt") cfg.dt = num();
            else if (key == "t_final") cfg.t_final = num();
            else if (key == "cfl") cfg.cfl = num();
            else known = false;
        } else if (section == "initial") {
            if (key == "scenario") cfg.scenario = val;
            else if (key == "m0") cfg.m0 = num();
            else if (key == "amplitude") cfg.amplitude = num();
            else if (key == "theta0") cfg.theta0 = num();
            else if (key == "radius") cfg.radius = num();
            else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(num());
            else known = false;
        } else if (section == "output") {
            if (key == "dir") cfg.dir = val;
            else if (key == "snap_every") cfg.snap_every = static_cast<int>(num());
            else if (key == "diag_file") cfg.diag_file = val;
            else known = false;
        } else {
            throw config_error("line " + std::to_string(ln) + ": key outside any section");
        }
        if (!known)
            throw config_error("line " + std::to_string(ln) + ": unknown key '" + key +
                               "' in section [" + section + "]");
    }
    cfg.validate();
    return cfg;
}

}  // namespace thpf

#endif
