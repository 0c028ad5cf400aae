// Command-line front end: run simulations, audit snapshot directories,
// and print manufactured-solution convergence tables.
#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "thpf/audit.hpp"
#include "thpf/io.hpp"
#include "thpf/mms.hpp"
#include "thpf/sim.hpp"

namespace fs = std::filesystem;
using namespace thpf;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::string resolve_out_dir(const std::string& cfg_dir, const std::string& flag_dir) {
    if (const char* env = std::getenv("THPF_OUT_DIR"); env && *env) return env;
    if (!flag_dir.empty()) return flag_dir;
    return cfg_dir;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory " + dir);
}

int cmd_run(const std::string& config_path, const std::string& out_dir_flag,
            long long seed_flag, bool quiet) {
    Config cfg = parse_config(read_file(config_path));
    if (seed_flag >= 0) cfg.seed = static_cast<std::uint64_t>(seed_flag);
    std::string out_dir = resolve_out_dir(cfg.dir, out_dir_flag);
    ensure_dir(out_dir);

    Grid g = cfg.grid();
    Trajectory traj = run(cfg, [&](const State& s, int n) {
        char name[32];
        std::snprintf(name, sizeof name, "snap_%06d.bin", n);
        write_snapshot(s, g, (fs::path(out_dir) / name).string());
    });
    std::string diag_path = (fs::path(out_dir) / cfg.diag_file).string();
    write_diagnostics(traj.records, diag_path);

    if (!quiet) {
        const DiagRecord& last = traj.records.back();
        std::printf("run complete: t=%.6g, %zu records -> %s\n", last.t,
                    traj.records.size(), diag_path.c_str());
        std::printf("  total_energy %.10g  entropy %.10g  theta in [%.4g, %.4g]\n",
                    last.total_energy, last.entropy, last.theta_min, last.theta_max);
        std::printf("  mean_phi drift %.3e  max |div u| %.3e\n",
                    std::abs(last.mean_phi - traj.records.front().mean_phi),
                    last.div_norm);
    }
    return 0;
}

int cmd_audit(const std::string& snap_dir, const std::string& out_dir_flag,
              long long seed_flag, bool quiet) {
    std::vector<std::string> paths;
    if (!fs::is_directory(snap_dir))
        throw io_error("not a directory: " + snap_dir);
    for (const auto& e : fs::directory_iterator(snap_dir)) {
        std::string name = e.path().filename().string();
        if (name.rfind("snap_", 0) == 0 && name.size() > 4 &&
            name.substr(name.size() - 4) == ".bin")
            paths.push_back(e.path().string());
    }
    if (paths.empty()) throw io_error("no snap_*.bin files in " + snap_dir);
    std::sort(paths.begin(), paths.end());

    Params p;  // audit of raw snapshots assumes the default physics
    Trajectory traj;
    for (const std::string& path : paths) {
        Snapshot snap = read_snapshot(path);
        if (traj.states.empty()) {
            traj.grid = Grid(static_cast<int>(snap.nx), static_cast<int>(snap.ny),
                             snap.lx, snap.ly);
            traj.params = p;
        } else if (snap.nx != static_cast<std::uint32_t>(traj.grid.nx) ||
                   snap.ny != static_cast<std::uint32_t>(traj.grid.ny)) {
            throw io_error("snapshot grid mismatch in " + path);
        }
        traj.states.push_back(std::move(snap.state));
    }
    for (size_t i = 0; i < traj.states.size(); ++i) {
        double dt = (i + 1 < traj.states.size())
                        ? traj.states[i + 1].t - traj.states[i].t
                        : (i > 0 ? traj.states[i].t - traj.states[i - 1].t : 1.0);
        traj.state_dts.push_back(dt);
        DiagRecord r = diagnostics(traj.states[i], traj.grid, p);
        r.dt = dt;
        traj.records.push_back(r);
    }

    std::string out_dir = resolve_out_dir(snap_dir, out_dir_flag);
    ensure_dir(out_dir);
    std::string diag_path = (fs::path(out_dir) / "audit.csv").string();
    write_diagnostics(traj.records, diag_path);
    traj.bounds = apriori_monitor(traj, p);

    std::uint64_t seed = seed_flag >= 0 ? static_cast<std::uint64_t>(seed_flag) : 1;
    double t_final = traj.states.back().t;
    double wf5 = 0, wf6 = 0;
    bool have_weak = traj.states.size() >= 2 && t_final > traj.states.front().t;
    if (have_weak) {
        TestFunction xi5 =
            TestFunction::random(t_final, traj.grid.lx, traj.grid.ly, seed, false);
        TestFunction xi6 =
            TestFunction::random(t_final, traj.grid.lx, traj.grid.ly, seed, true);
        wf5 = weak_energy_residual(traj, xi5, traj.grid, p);
        wf6 = weak_entropy_check(traj, xi6, traj.grid, p);
    }

    if (!quiet) {
        std::printf("audited %zu snapshots -> %s\n", traj.states.size(),
                    diag_path.c_str());
        double m0 = traj.records.front().mean_phi;
        double worst = 0, tmin = traj.records.front().theta_min;
        for (const DiagRecord& r : traj.records) {
            worst = std::max(worst, std::abs(r.mean_phi - m0));
            tmin = std::min(tmin, r.theta_min);
        }
        std::printf("  mass drift %.3e  theta_min %.6g\n", worst, tmin);
        if (have_weak)
            std::printf("  weak energy residual %.6e  weak entropy check %.6e (seed %llu)\n",
                        wf5, wf6, static_cast<unsigned long long>(seed));
        std::printf("  a-priori monitors: theta_Lp %.6g  mu_L2H1 %.6g  Du_L2 %.6g\n",
                    traj.bounds.theta_Lp, traj.bounds.mu_L2H1, traj.bounds.Du_L2);
    }
    return 0;
}

int cmd_mms(const std::string& eq_name, int levels, bool quiet) {
    MmsEquation eq = mms_equation_from_string(eq_name);
    if (levels < 1 || levels > 5)
        throw domain_error("mms: --levels must be in [1, 5]");
    if (!quiet)
        std::printf("%-6s %-10s %-14s %s\n", "level", "grid", "l2_error", "ratio");
    double prev = 0;
    for (int lvl = 0; lvl < levels; ++lvl) {
        double err = mms_error(eq, lvl);
        if (!quiet) {
            int n = 16 << lvl;
            if (lvl == 0)
                std::printf("%-6d %dx%-7d %-14.6e %s\n", lvl, n, n, err, "-");
            else
                std::printf("%-6d %dx%-7d %-14.6e %.3f\n", lvl, n, n, err, prev / err);
        }
        prev = err;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral two-phase non-isothermal flow simulator"};
    app.require_subcommand(1);

    std::string out_dir_flag;
    long long seed_flag = -1;
    bool quiet = false;
    app.add_option("--out-dir", out_dir_flag, "override the output directory");
    app.add_option("--seed", seed_flag, "override the RNG seed");
    app.add_flag("--quiet", quiet, "suppress progress output");

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "simulate a config file, audit inline");
    run_cmd->add_option("config", config_path, "path to the config file")->required();

    std::string snap_dir;
    auto* audit_cmd =
        app.add_subcommand("audit", "recompute diagnostics from a snapshot directory");
    audit_cmd->add_option("snapshot-dir", snap_dir, "directory with snap_*.bin")
        ->required();

    std::string eq_name;
    int levels = 4;
    auto* mms_cmd = app.add_subcommand("mms", "manufactured-solution convergence table");
    mms_cmd->add_option("--eq", eq_name, "equation: ch, ns, or heat")->required();
    mms_cmd->add_option("--levels", levels, "number of refinement levels");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return cmd_run(config_path, out_dir_flag, seed_flag, quiet);
        if (audit_cmd->parsed())
            return cmd_audit(snap_dir, out_dir_flag, seed_flag, quiet);
        return cmd_mms(eq_name, levels, quiet);
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const domain_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const grid_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const positivity_error& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return kExitSolver;
    } catch (const iteration_error& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return kExitSolver;
    } catch (const io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
}
