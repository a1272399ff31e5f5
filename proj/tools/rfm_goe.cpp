// rfm_goe: command-line front end for the RFM gain-of-entrainment toolkit.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rfm/analysis.hpp"
#include "rfm/equilibrium.hpp"
#include "rfm/error.hpp"
#include "rfm/integrator.hpp"
#include "rfm/orbit.hpp"
#include "rfm/reproduce.hpp"
#include "rfm/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rfm;

namespace {

enum Exit { ok = 0, usage = 1, validation = 2, numerical = 3, reproduction = 4 };

// Files written by the current command; removed unless committed.
class Artifacts {
public:
    ~Artifacts() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& p : paths_) fs::remove(p, ec);
    }
    void add(const fs::path& p) { paths_.push_back(p); }
    void add(const std::vector<fs::path>& ps) { paths_.insert(paths_.end(), ps.begin(), ps.end()); }
    void commit() { committed_ = true; }

private:
    std::vector<fs::path> paths_;
    bool committed_ = false;
};

struct Options {
    std::string scenario;
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 1;
    int samples = 0;
    double tol = 0.0;
    unsigned jobs = 0;
};

Scenario load(const Options& o) {
    std::vector<std::string> warnings;
    Scenario s = parse_scenario(o.scenario, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    if (o.samples > 0) {
        s.grid_M = o.samples;
        s.solver.steps_per_period = o.samples;
    }
    if (o.tol > 0.0) s.orbit_tol = o.tol;
    return s;
}

// Writes `text` to <out>/<file> when --out is set, else to stdout.
void emit(const Options& o, Artifacts& art, const std::string& file, const auto& writer) {
    if (o.out.empty()) {
        writer(std::cout);
        return;
    }
    fs::create_directories(o.out);
    const fs::path p = fs::path(o.out) / file;
    art.add(p);
    std::ofstream f(p);
    if (!f) throw std::runtime_error(p.string() + ": cannot open for writing");
    writer(f);
    if (!f) throw std::runtime_error(p.string() + ": write failed");
}

void require_rfm(const Scenario& s, const char* cmd) {
    if (s.system != SystemKind::rfm)
        throw ValidationError("system", std::string(cmd) + " needs an rfm scenario");
}

int cmd_simulate(const Options& o) {
    Artifacts art;
    const Scenario s = load(o);
    const std::size_t dim = s.system == SystemKind::rfm ? s.n : 1;
    std::vector<double> x0 = s.x0.value_or(std::vector<double>(dim, 0.0));
    const auto [t0, t1] = s.t_span.value_or(std::pair{0.0, 10.0 * s.T});
    std::vector<Accumulator> accs{{"production", Integrand::production, 0}};
    const Trajectory tr = integrate(s.to_system(), x0, t0, t1, s.solver, accs);
    emit(o, art, s.id + "_trajectory.csv", [&](std::ostream& out) { write_trajectory_csv(out, tr); });
    if (tr.max_clamp > 0.0) std::cerr << "note: max clamp correction " << format_full(tr.max_clamp) << "\n";
    art.commit();
    return ok;
}

int cmd_equilibrium(const Options& o) {
    Artifacts art;
    const Scenario s = load(o);
    require_rfm(s, "equilibrium");
    const Equilibrium eq = solve_equilibrium(mean_rates(s.schedule()));
    emit(o, art, s.id + "_equilibrium.json", [&](std::ostream& out) { out << to_json(eq).dump(2) << "\n"; });
    art.commit();
    return ok;
}

int cmd_orbit(const Options& o) {
    Artifacts art;
    const Scenario s = load(o);
    const PeriodicOrbit orbit = find_periodic_orbit(s.to_system(), s.orbit_config());
    emit(o, art, s.id + "_orbit.csv", [&](std::ostream& out) { write_orbit_csv(out, orbit); });
    json stats{{"closure_error", orbit.closure_error},
               {"periods_used", orbit.periods_used},
               {"contraction_ratio", orbit.contraction_ratio},
               {"mean_production", orbit.mean_production},
               {"max_clamp", orbit.max_clamp}};
    if (o.out.empty())
        std::cerr << stats.dump(2) << "\n";
    else
        emit(o, art, s.id + "_orbit_stats.json", [&](std::ostream& out) { out << stats.dump(2) << "\n"; });
    art.commit();
    return ok;
}

int cmd_goe(const Options& o) {
    Artifacts art;
    const Scenario s = load(o);
    json doc;
    if (s.system == SystemKind::tanh_demo) {
        const TanhDemoSystem sys = std::get<TanhDemoSystem>(s.to_system());
        const DemoAnalysis d = analyze_demo(sys, s.orbit_config());
        doc = {{"id", s.id}, {"equilibrium", d.equilibrium}, {"mean_output", d.mean_output}, {"goe_gap", d.goe_gap}};
    } else {
        const GoeAnalysis a = analyze_goe(s.schedule(), s.orbit_config());
        doc = {{"id", s.id}, {"moments", to_json(a.moments)}, {"verdict", to_json(a.verdict)}};
    }
    emit(o, art, s.id + "_goe.json", [&](std::ostream& out) { out << doc.dump(2) << "\n"; });
    art.commit();
    return ok;
}

struct BatchArgs {
    std::vector<std::string> files;
    int random = 0;
    std::size_t n = 3;
    std::string condition;
};

int cmd_batch(const Options& o, const BatchArgs& b) {
    Artifacts art;
    std::vector<BatchScenario> scenarios;
    OrbitConfig cfg;
    if (o.samples > 0) cfg.grid_M = o.samples;
    if (o.tol > 0.0) cfg.tol = o.tol;
    for (const auto& f : b.files) {
        Options one = o;
        one.scenario = f;
        const Scenario s = load(one);
        require_rfm(s, "batch");
        scenarios.push_back({s.id, s.schedule()});
    }
    std::optional<Condition> cond;
    if (!b.condition.empty()) {
        cond = parse_condition(b.condition);
        if (!cond) throw ValidationError("condition", "unknown condition '" + b.condition + "'");
    }
    for (int k = 0; k < b.random; ++k) {
        char id[32];
        std::snprintf(id, sizeof id, "random%05d", k);
        try {
            scenarios.push_back({id, random_scenario(b.n, cond, o.seed + std::uint64_t(k))});
        } catch (const std::invalid_argument& e) {
            throw ValidationError("condition", e.what());
        }
    }
    if (scenarios.empty()) throw ValidationError("batch", "no scenarios given (pass files or --random N)");

    unsigned jobs = o.jobs;
    if (jobs == 0) jobs = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), scenarios.size()));
    const auto rows = run_batch(scenarios, cfg, jobs);

    if (o.format == "csv")
        emit(o, art, "batch.csv", [&](std::ostream& out) { write_batch_csv(out, rows); });
    else
        emit(o, art, "batch.json", [&](std::ostream& out) { out << batch_json(rows).dump(2) << "\n"; });

    for (const auto& r : rows)
        if (!r.ok()) {
            std::cerr << r.id << ": " << r.error << "\n";
            return numerical;
        }
    art.commit();
    return ok;
}

int cmd_reproduce(const Options& o, const std::string& name) {
    Artifacts art;
    std::optional<fs::path> dir;
    if (!o.out.empty()) dir = o.out;
    const Reproduction r = reproduce(name, dir);
    art.add(r.artifacts);
    std::cout << format_table(r);
    art.commit();  // data series are kept even when a check fails
    return r.passed() ? ok : reproduction;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RFM gain-of-entrainment toolkit"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool needs_scenario) {
        auto* opt = sub->add_option("--scenario", o.scenario, "scenario JSON file");
        if (needs_scenario) opt->required();
        sub->add_option("--out", o.out, "output directory (default: stdout)");
        sub->add_option("--samples", o.samples, "grid points / RK4 steps per period (default 4096)");
        sub->add_option("--tol", o.tol, "orbit closure tolerance (default 1e-10)");
    };

    auto* simulate = app.add_subcommand("simulate", "integrate a scenario and write the trajectory CSV");
    common(simulate, true);
    auto* equilibrium = app.add_subcommand("equilibrium", "print e and R_C for the mean rates (JSON)");
    common(equilibrium, true);
    auto* orbit = app.add_subcommand("orbit", "find the periodic orbit; write its CSV and closure stats");
    common(orbit, true);
    auto* goe = app.add_subcommand("goe", "moment report and GOE verdict (JSON)");
    common(goe, true);

    BatchArgs b;
    auto* batch = app.add_subcommand("batch", "analyze many scenarios; write the batch table");
    common(batch, false);
    batch->add_option("files", b.files, "scenario JSON files");
    batch->add_option("--random", b.random, "number of seeded random scenarios")->check(CLI::NonNegativeNumber);
    batch->add_option("--n", b.n, "sites for random scenarios (default 3)")->check(CLI::Range(1, 64));
    batch->add_option("--condition", b.condition, "impose condition I..VI on random scenarios");
    batch->add_option("--seed", o.seed, "base seed for random scenarios (default 1)");
    batch->add_option("--format", o.format, "csv or json (default json)")->check(CLI::IsMember({"csv", "json"}));
    batch->add_option("--jobs", o.jobs, "worker threads (default: min(scenarios, cores))");

    std::string which;
    auto* repro = app.add_subcommand("reproduce", "compare bundled examples against reference values");
    repro->add_option("example", which, "example1 | example2-3 | example5")
        ->required()
        ->check(CLI::IsMember(reproduction_names()));
    repro->add_option("--out", o.out, "directory for plot-ready CSV series");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*simulate) return cmd_simulate(o);
        if (*equilibrium) return cmd_equilibrium(o);
        if (*orbit) return cmd_orbit(o);
        if (*goe) return cmd_goe(o);
        if (*batch) return cmd_batch(o, b);
        if (*repro) return cmd_reproduce(o, which);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return validation;
    } catch (const ScheduleInvalid& e) {
        std::cerr << "error: " << e.what() << "\n";
        return validation;
    } catch (const ContractViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return validation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return numerical;
    } catch (const std::runtime_error& e) {
        // parse_scenario reports a missing file this way
        std::cerr << "error: " << e.what() << "\n";
        return validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return numerical;
    }
    return usage;
}
