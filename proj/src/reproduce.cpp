#include "rfm/reproduce.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rfm/analysis.hpp"
#include "rfm/builtin_scenarios.hpp"
#include "rfm/model.hpp"
#include "rfm/scenario.hpp"

namespace rfm {
namespace {

std::filesystem::path emit(const std::filesystem::path& dir, const std::string& file, auto&& writer) {
    std::filesystem::create_directories(dir);
    const auto path = dir / file;
    std::ofstream out(path);
    writer(out);
    return path;
}

Reproduction example1(const std::optional<std::filesystem::path>& out_dir) {
    Reproduction r{"example1", {}, {}};
    const TanhDemoSystem forced = builtin::tanh_demo();
    const TanhDemoSystem constant{Signal{0.0, {}}, 1.0};

    const std::vector<double> x0{0.0};
    const Trajectory settle = integrate(constant, x0, 0.0, 70.0);
    r.checks.push_back({"x(70), u = 0", Check::Kind::near, 0.8047, settle.final_state()[0], 5e-4});

    const DemoAnalysis d = analyze_demo(forced);
    r.checks.push_back({"mean gamma, u = sin(2 pi t)", Check::Kind::near, 0.8127, d.mean_output, 1e-3});
    r.checks.push_back({"GOE gap (mean gamma - e)", Check::Kind::above, 0.0, d.goe_gap, 0.0});

    if (out_dir) r.artifacts.push_back(emit(*out_dir, "example1_orbit.csv", [&](std::ostream& o) { write_orbit_csv(o, d.orbit); }));
    return r;
}

Reproduction example23(const std::optional<std::filesystem::path>& out_dir) {
    Reproduction r{"example2-3", {}, {}};
    const RateSchedule schedule = builtin::three_site_schedule();
    const System system = RfmSystem{schedule};

    const std::vector<double> x0{0.3, 0.4, 0.5};
    const Trajectory tr = integrate(system, x0, 0.0, 20.0 * std::numbers::pi, {}, {{"production", Integrand::production, 0}});
    const auto x20 = tr.final_state();
    const double ref[3] = {0.7809, 0.1624, 0.3290};
    for (int i = 0; i < 3; ++i)
        r.checks.push_back({"x" + std::to_string(i + 1) + "(20 pi)", Check::Kind::near, ref[i], x20[i], 1e-3});

    const GoeAnalysis a = analyze_goe(schedule);
    for (int i = 0; i < 3; ++i)
        r.checks.push_back({"gamma" + std::to_string(i + 1) + "(0)", Check::Kind::near, ref[i], a.orbit.gamma[i][0], 1e-3});
    r.checks.push_back({"R_P", Check::Kind::near, 0.5927, a.verdict.R_P, 1e-3});
    r.checks.push_back({"e_3", Check::Kind::near, 0.3085, a.equilibrium.e[2], 5e-4});
    r.checks.push_back({"R_C", Check::Kind::near, 0.6171, a.verdict.R_C, 5e-4});
    r.checks.push_back({"GOE gap (R_P - R_C)", Check::Kind::below, 0.0, a.verdict.goe_gap, 0.0});

    if (out_dir) {
        r.artifacts.push_back(emit(*out_dir, "example2_trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, tr); }));
        r.artifacts.push_back(emit(*out_dir, "example2_orbit.csv", [&](std::ostream& o) { write_orbit_csv(o, a.orbit); }));
    }
    return r;
}

Reproduction example5(const std::optional<std::filesystem::path>& out_dir) {
    Reproduction r{"example5", {}, {}};
    const auto rows = run_batch(builtin::four_site_batch());
    for (const auto& row : rows) {
        if (!row.ok()) {
            r.checks.push_back({row.id + " failed: " + row.error, Check::Kind::near, 0.0, NAN, 0.0});
            continue;
        }
        r.checks.push_back({row.id + " R_P - R_C", Check::Kind::below, 0.0, row.analysis->verdict.goe_gap, 0.0});
        r.checks.push_back({row.id + " z_4 sign changes", Check::Kind::at_least, 2.0, double(row.zn_sign_changes), 0.0});
    }
    if (out_dir) {
        r.artifacts.push_back(emit(*out_dir, "example5_batch.csv", [&](std::ostream& o) { write_batch_csv(o, rows); }));
        // gamma_4 over one period for each run, and the constant-rate e_4.
        r.artifacts.push_back(emit(*out_dir, "example5_gamma4.csv", [&](std::ostream& o) {
            o << "t";
            for (const auto& row : rows) o << "," << row.id;
            o << ",e4\n";
            if (rows.empty() || !rows.front().ok()) return;
            const auto& grid = rows.front().analysis->orbit.grid;
            for (std::size_t m = 0; m < grid.size(); ++m) {
                o << format_full(grid[m]);
                for (const auto& row : rows) o << "," << (row.ok() ? format_full(row.analysis->orbit.gamma[3][m]) : "");
                o << "," << format_full(rows.front().analysis->equilibrium.e[3]) << "\n";
            }
        }));
    }
    return r;
}

} // namespace

bool Check::passed() const {
    if (!std::isfinite(computed)) return false;
    switch (kind) {
    case Kind::near: return std::abs(computed - reference) <= tolerance;
    case Kind::below: return computed < reference;
    case Kind::above: return computed > reference;
    case Kind::at_least: return computed >= reference;
    }
    return false;
}

bool Reproduction::passed() const {
    for (const auto& c : checks)
        if (!c.passed()) return false;
    return !checks.empty();
}

std::vector<std::string> reproduction_names() { return {"example1", "example2-3", "example5"}; }

Reproduction reproduce(const std::string& name, const std::optional<std::filesystem::path>& out_dir) {
    if (name == "example1") return example1(out_dir);
    if (name == "example2-3") return example23(out_dir);
    if (name == "example5") return example5(out_dir);
    throw std::invalid_argument("unknown reproduction '" + name + "' (expected example1, example2-3 or example5)");
}

std::string format_table(const Reproduction& r) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-30s %-12s %-24s %-10s %-9s %s\n", "quantity", "reference", "computed", "rounded",
                  "tolerance", "status");
    os << line;
    for (const auto& c : r.checks) {
        std::string ref;
        char buf[64];
        switch (c.kind) {
        case Check::Kind::near: std::snprintf(buf, sizeof buf, "%.4f", c.reference); break;
        case Check::Kind::below: std::snprintf(buf, sizeof buf, "< %g", c.reference); break;
        case Check::Kind::above: std::snprintf(buf, sizeof buf, "> %g", c.reference); break;
        case Check::Kind::at_least: std::snprintf(buf, sizeof buf, ">= %g", c.reference); break;
        }
        ref = buf;
        char tol[32] = "-";
        if (c.kind == Check::Kind::near) std::snprintf(tol, sizeof tol, "%.0e", c.tolerance);
        std::snprintf(line, sizeof line, "%-30s %-12s %-24s %-10.4f %-9s %s\n", c.quantity.c_str(), ref.c_str(),
                      format_full(c.computed).c_str(), c.computed, tol, c.passed() ? "PASS" : "FAIL");
        os << line;
    }
    os << r.name << ": " << (r.passed() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

} // namespace rfm
