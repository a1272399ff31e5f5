#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "rfm/builtin_scenarios.hpp"
#include "rfm/error.hpp"
#include "rfm/orbit.hpp"

using namespace rfm;

namespace {

const PeriodicOrbit& three_site_orbit() {
    static const PeriodicOrbit o = find_periodic_orbit(RfmSystem{builtin::three_site_schedule()});
    return o;
}

} // namespace

TEST_CASE("three-site orbit at phase 0") {
    const PeriodicOrbit& o = three_site_orbit();
    CHECK(o.dimension == 3);
    CHECK(o.samples() == 4096);
    CHECK(o.gamma[0][0] == doctest::Approx(0.7809).epsilon(1e-3));
    CHECK(o.gamma[1][0] == doctest::Approx(0.1624).epsilon(1e-3));
    CHECK(o.gamma[2][0] == doctest::Approx(0.3290).epsilon(1e-3));
    CHECK(o.closure_error < 1e-10);
    CHECK(o.contraction_ratio < 1.0);
    CHECK(o.max_clamp == 0.0);
    CHECK(o.mean_production == doctest::Approx(0.5927).epsilon(1e-3));
}

TEST_CASE("orbit closes: one more period returns to the start") {
    const PeriodicOrbit& o = three_site_orbit();
    const auto start = o.state_at(0);
    const auto again = advance_period(RfmSystem{builtin::three_site_schedule()}, start);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(again[i] - start[i]) < 1e-10);
}

TEST_CASE("accumulated production equals the quadrature of the sampled orbit") {
    const PeriodicOrbit& o = three_site_orbit();
    const double q = period_average(o, [](double, std::span<const double> x, std::span<const double> u) {
        return u[3] * x[2];
    });
    CHECK(std::abs(q - o.mean_production) < 1e-10);
}

TEST_CASE("orbit does not depend on the seed") {
    const System sys = RfmSystem{builtin::three_site_schedule()};
    OrbitConfig cfg;
    cfg.grid_M = 1024;
    const auto a = find_periodic_orbit(sys, cfg, std::vector<double>{0.0, 0.0, 0.0});
    const auto b = find_periodic_orbit(sys, cfg, std::vector<double>{1.0, 1.0, 1.0});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t m = 0; m < a.samples(); m += 97) CHECK(std::abs(a.gamma[i][m] - b.gamma[i][m]) < 1e-9);
}

TEST_CASE("grid refinement leaves the production rate unchanged") {
    const System sys = RfmSystem{builtin::three_site_schedule()};
    OrbitConfig coarse;
    coarse.grid_M = 1024;
    const auto a = find_periodic_orbit(sys, coarse);
    CHECK(std::abs(a.mean_production - three_site_orbit().mean_production) < 1e-9);
}

TEST_CASE("constant rates: the orbit is the equilibrium") {
    const RateSchedule s(1.0, {{2.0, {}}, {1.0, {}}, {3.0, {}}});
    const Equilibrium eq = solve_equilibrium(mean_rates(s));
    const auto o = find_periodic_orbit(RfmSystem{s});
    for (std::size_t i = 0; i < 2; ++i)
        for (double v : o.gamma[i]) CHECK(std::abs(v - eq.e[i]) < 1e-9);
    const MomentReport r = compute_moments(o, s, eq);
    CHECK(r.degenerate());
    CHECK(std::abs(r.goe_gap) < 1e-9);
}

TEST_CASE("moments against direct sums") {
    const RateSchedule s = builtin::three_site_schedule();
    const PeriodicOrbit& o = three_site_orbit();
    const Equilibrium eq = solve_equilibrium(mean_rates(s));
    const MomentReport r = compute_moments(o, s, eq, true);
    const std::size_t M = o.samples();
    auto z = [&](std::size_t j, std::size_t m) { return o.gamma[j - 1][m] - eq.e[j - 1]; };
    for (std::size_t i = 0; i <= 3; ++i)
        for (std::size_t j = 1; j <= 3; ++j) {
            double sum = 0;
            for (std::size_t m = 0; m < M; ++m) sum += o.rates[i][m] * z(j, m);
            CHECK(r.eta(i, j) == doctest::Approx(sum / double(M)).epsilon(1e-12).scale(1e-3));
        }
    double tri = 0;
    for (std::size_t m = 0; m < M; ++m) tri += o.rates[1][m] * z(1, m) * z(2, m);
    CHECK(r.eta(1, 1, 2) == doctest::Approx(tri / double(M)).epsilon(1e-12).scale(1e-3));
    CHECK(r.eta(0, 4) == 0.0);
    CHECK(r.eta(3, 3, 4) == 0.0);
    CHECK(r.R_C == doctest::Approx(0.6171).epsilon(5e-4));
    CHECK(r.goe_gap < 0.0);

    const MomentReport sparse = compute_moments(o, s, eq);
    CHECK_THROWS_AS(sparse.eta(3, 1), ContractViolation);
}

TEST_CASE("moment identities hold on the orbit") {
    const RateSchedule s = builtin::three_site_schedule();
    const Equilibrium eq = solve_equilibrium(mean_rates(s));
    const MomentReport r = compute_moments(three_site_orbit(), s, eq);
    const auto& res = r.residuals;
    CHECK(std::abs(res.flow) < 1e-8);
    CHECK(std::abs(res.production) < 1e-8);
    CHECK(res.max_abs_eta3() < 1e-8);
    CHECK(res.min_slack() > -1e-8);
    CHECK(res.eta3.size() == 4);
    CHECK(res.slack.size() == 3);
    CHECK(res.named().size() == 9);
}

TEST_CASE("tanh demo orbit") {
    const auto o = find_periodic_orbit(builtin::tanh_demo());
    CHECK(o.mean_production == doctest::Approx(0.8127).epsilon(1e-3));
    CHECK(period_average(o.gamma[0]) == doctest::Approx(o.mean_production).epsilon(1e-9));
}

TEST_CASE("orbit failures") {
    OrbitConfig cfg;
    cfg.max_periods = 1;
    cfg.tol = 1e-15;
    const System sys = RfmSystem{builtin::three_site_schedule()};
    CHECK_THROWS_AS(find_periodic_orbit(sys, cfg, std::vector<double>{0.0, 0.0, 0.0}), OrbitNotConverged);
    cfg = {};
    cfg.grid_M = 0;
    CHECK_THROWS_AS(find_periodic_orbit(sys, cfg), ContractViolation);
}

TEST_CASE("period averages and sign changes") {
    std::vector<double> c(64);
    for (std::size_t m = 0; m < c.size(); ++m) c[m] = std::cos(2 * std::numbers::pi * double(m) / 64.0);
    CHECK(std::abs(period_average(c)) < 1e-15);
    CHECK(cyclic_sign_changes(c) == 2);
    CHECK(cyclic_sign_changes(std::vector<double>{1, 2, 3}) == 0);
    CHECK(cyclic_sign_changes(std::vector<double>{1, -1, 1, -1}) == 4);
    CHECK(cyclic_sign_changes(std::vector<double>{1, 0, -1, 0}) == 2);
    CHECK(cyclic_sign_changes(std::vector<double>{}) == 0);
}
