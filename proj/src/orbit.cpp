#include "rfm/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "rfm/error.hpp"
#include "rfm/kernels/kernels.hpp"
#include "rfm/model.hpp"
#include "stepper.hpp"

namespace rfm {
namespace {

double max_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

std::vector<double> default_seed(const System& system) {
    if (const auto* rfm = std::get_if<RfmSystem>(&system)) return solve_equilibrium(mean_rates(rfm->schedule)).e;
    const double u = std::get<TanhDemoSystem>(system).input.mean;
    if (u >= -1.0 && u < 0.5) return {tanh_demo_equilibrium(u)};
    return {0.0};
}

} // namespace

std::vector<double> PeriodicOrbit::state_at(std::size_t m) const {
    std::vector<double> s(dimension);
    for (std::size_t i = 0; i < dimension; ++i) s[i] = gamma[i][m];
    return s;
}

std::vector<double> PeriodicOrbit::rates_at(std::size_t m) const {
    std::vector<double> u(rates.size());
    for (std::size_t c = 0; c < rates.size(); ++c) u[c] = rates[c][m];
    return u;
}

PeriodicOrbit find_periodic_orbit(const System& system, const OrbitConfig& cfg,
                                  std::optional<std::span<const double>> seed) {
    if (cfg.grid_M < 1) throw ContractViolation("find_periodic_orbit: grid_M must be >= 1");
    if (!(cfg.tol > 0.0)) throw ContractViolation("find_periodic_orbit: tolerance must be positive");
    if (cfg.max_periods < 1) throw ContractViolation("find_periodic_orbit: max_periods must be >= 1");

    detail::GridStepper stepper(system, cfg.grid_M, {Accumulator{"production", Integrand::production, 0}});
    const auto& problem = stepper.problem();
    const std::size_t n = problem.states();
    const long M = cfg.grid_M;

    std::vector<double> x = seed ? std::vector<double>(seed->begin(), seed->end()) : default_seed(system);
    problem.validate_initial(x);

    std::vector<double> y(n + 1);
    double distance = std::numeric_limits<double>::infinity();
    double ratio = 0.0;
    int periods = 0;
    while (true) {
        if (periods >= cfg.max_periods) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "periodic orbit not found within %d periods (last displacement %.3g, contraction ratio %.6f)",
                          cfg.max_periods, distance, ratio);
            throw OrbitNotConverged(msg, periods, distance, ratio);
        }
        std::copy(x.begin(), x.end(), y.begin());
        y[n] = 0.0;
        for (long s = 0; s < M; ++s) stepper.step(y.data(), s);
        ++periods;
        const double d = max_distance(std::span<const double>(y).first(n), x);
        if (std::isfinite(distance) && distance > 0.0) ratio = d / distance;
        distance = d;
        std::copy(y.begin(), y.begin() + static_cast<long>(n), x.begin());
        if (d < cfg.tol) break;
    }

    PeriodicOrbit orbit;
    orbit.period = problem.period();
    orbit.dimension = n;
    orbit.grid.resize(static_cast<std::size_t>(M));
    orbit.gamma.assign(n, std::vector<double>(static_cast<std::size_t>(M)));
    orbit.rates.assign(problem.channels(), std::vector<double>(static_cast<std::size_t>(M)));
    orbit.contraction_ratio = ratio;

    std::copy(x.begin(), x.end(), y.begin());
    y[n] = 0.0;
    for (long m = 0; m < M; ++m) {
        orbit.grid[m] = orbit.period * static_cast<double>(m) / static_cast<double>(M);
        for (std::size_t i = 0; i < n; ++i) orbit.gamma[i][m] = y[i];
        const auto u = stepper.rates_at_grid(m);
        for (std::size_t c = 0; c < u.size(); ++c) orbit.rates[c][m] = u[c];
        orbit.max_clamp = std::max(orbit.max_clamp, stepper.step(y.data(), m));
    }
    orbit.closure_error = max_distance(std::span<const double>(y).first(n), x);
    orbit.periods_used = periods + 1;
    orbit.mean_production = y[n] / orbit.period;
    return orbit;
}

double period_average(const PeriodicOrbit& orbit, const OrbitIntegrand& integrand) {
    const std::size_t M = orbit.samples();
    if (M == 0) return 0.0;
    double s = 0.0;
    std::vector<double> state(orbit.dimension), rates(orbit.rates.size());
    for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t i = 0; i < orbit.dimension; ++i) state[i] = orbit.gamma[i][m];
        for (std::size_t c = 0; c < rates.size(); ++c) rates[c] = orbit.rates[c][m];
        s += integrand(orbit.grid[m], state, rates);
    }
    return s / static_cast<double>(M);
}

double period_average(std::span<const double> samples) {
    if (samples.empty()) return 0.0;
    return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
}

double IdentityResiduals::max_abs_eta3() const {
    double w = 0.0;
    for (double r : eta3) w = std::max(w, std::abs(r));
    return w;
}

double IdentityResiduals::min_slack() const {
    double w = std::numeric_limits<double>::infinity();
    for (double s : slack) w = std::min(w, s);
    return slack.empty() ? 0.0 : w;
}

std::vector<std::pair<std::string, double>> IdentityResiduals::named() const {
    std::vector<std::pair<std::string, double>> out{{"flow", flow}, {"production", production}};
    for (std::size_t i = 0; i < eta3.size(); ++i) out.emplace_back("eta3." + std::to_string(i), eta3[i]);
    for (std::size_t i = 0; i < slack.size(); ++i) out.emplace_back("slack." + std::to_string(i + 1), slack[i]);
    return out;
}

double MomentReport::eta(std::size_t i, std::size_t j) const {
    if (j == 0 || j == n + 1) return 0.0;
    const auto it = eta2.find({i, j});
    if (it == eta2.end())
        throw ContractViolation("eta_{" + std::to_string(i) + "," + std::to_string(j) + "} was not computed");
    return it->second;
}

double MomentReport::eta(std::size_t i, std::size_t j, std::size_t k) const {
    if (j == 0 || j == n + 1 || k == 0 || k == n + 1) return 0.0;
    const auto it = eta3.find({i, j, k});
    if (it == eta3.end())
        throw ContractViolation("eta_{" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                                "} was not computed");
    return it->second;
}

bool MomentReport::degenerate() const {
    return std::any_of(constant_site.begin(), constant_site.end(), [](bool b) { return b; });
}

MomentReport compute_moments(const PeriodicOrbit& orbit, const RateSchedule& schedule, const Equilibrium& eq,
                             bool full_table) {
    const std::size_t n = schedule.sites();
    if (orbit.dimension != n || eq.e.size() != n || orbit.rates.size() != n + 1)
        throw ContractViolation("compute_moments: orbit, schedule and equilibrium dimensions differ");
    const std::size_t M = orbit.samples();
    const auto& k = kernels::active();

    MomentReport r;
    r.n = n;
    r.e = eq.e;
    r.R_C = eq.R_C;
    r.R_P = orbit.mean_production;
    r.goe_gap = r.R_P - r.R_C;

    // z[j] holds site j (1-based); slots 0 and n+1 stay empty and are never read.
    std::vector<std::vector<double>> z(n + 2);
    for (std::size_t j = 1; j <= n; ++j) {
        z[j].resize(M);
        const double mean = period_average(orbit.gamma[j - 1]);
        double dev = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            z[j][m] = orbit.gamma[j - 1][m] - eq.e[j - 1];
            dev = std::max(dev, std::abs(orbit.gamma[j - 1][m] - mean));
        }
        r.mean_x.push_back(mean);
        r.mean_z.push_back(mean - eq.e[j - 1]);
        r.constant_site.push_back(dev < kConstantComponentTolerance);
    }

    auto eta2 = [&](std::size_t i, std::size_t j) {
        r.eta2[{i, j}] = k.mean_product(orbit.rates[i].data(), z[j].data(), M);
    };
    if (full_table) {
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 1; j <= n; ++j) eta2(i, j);
    } else {
        eta2(0, 1);
        for (std::size_t i = 1; i <= n; ++i) {
            eta2(i, i);
            if (i < n) eta2(i, i + 1);
        }
    }
    for (std::size_t i = 1; i < n; ++i)
        r.eta3[{i, i, i + 1}] = k.mean_triple(orbit.rates[i].data(), z[i].data(), z[i + 1].data(), M);

    r.residuals = identity_residuals(r, eq);
    return r;
}

IdentityResiduals identity_residuals(const MomentReport& report, const Equilibrium& eq) {
    const std::size_t n = report.n;
    if (eq.e.size() != n) throw ContractViolation("identity_residuals: dimension mismatch");
    auto e = [&](std::size_t i) { return i == 0 ? 1.0 : i == n + 1 ? 0.0 : eq.e[i - 1]; };
    const double eta01 = report.eta(0, 1);

    IdentityResiduals res;
    res.flow = eta01 + report.eta(n, n);
    res.production = report.R_P + eta01 - report.R_C;
    for (std::size_t i = 0; i <= n; ++i) {
        res.eta3.push_back(report.eta(i, i, i + 1) - eta01 - report.eta(i, i) * (1.0 - e(i + 1)) +
                           report.eta(i, i + 1) * e(i));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        const double lower = report.eta(i, i + 1) * e(i) * e(i) - report.eta(i - 1, i - 1) * (1.0 - e(i)) * (1.0 - e(i));
        res.slack.push_back(eta01 - lower);
    }
    return res;
}

int cyclic_sign_changes(std::span<const double> samples) {
    int prev = 0;
    int first = 0;
    int changes = 0;
    for (double v : samples) {
        const int s = (v > 0.0) - (v < 0.0);
        if (s == 0) continue;
        if (first == 0) first = s;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    if (first != 0 && prev != 0 && first != prev) ++changes;
    return changes;
}

} // namespace rfm
