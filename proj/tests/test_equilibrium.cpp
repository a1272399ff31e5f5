#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "rfm/equilibrium.hpp"
#include "rfm/error.hpp"

using namespace rfm;

TEST_CASE("three-site means (3, 1, 4, 2)") {
    const std::vector<double> u{3, 1, 4, 2};
    const Equilibrium eq = solve_equilibrium(u);
    CHECK(eq.e[0] == doctest::Approx(0.7943).epsilon(5e-4));
    CHECK(eq.e[1] == doctest::Approx(0.2231).epsilon(5e-4));
    CHECK(eq.e[2] == doctest::Approx(0.3085).epsilon(5e-4));
    CHECK(eq.R_C == doctest::Approx(0.6171).epsilon(5e-4));
    CHECK(eq.residual < 1e-12);
    const auto ref = oracle::settle(u);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(eq.e[i] - ref[i]) < 1e-9);
}

TEST_CASE("single site closed form") {
    for (auto [a, b] : {std::pair{1.0, 1.0}, {3.0, 0.5}, {0.01, 40.0}}) {
        const std::vector<double> u{a, b};
        const Equilibrium eq = solve_equilibrium(u);
        CHECK(eq.e[0] == doctest::Approx(a / (a + b)).epsilon(1e-12));
        CHECK(eq.R_C == doctest::Approx(a * b / (a + b)).epsilon(1e-12));
    }
}

TEST_CASE("every link carries the same flux") {
    std::mt19937_64 g(21);
    std::uniform_real_distribution<double> r(0.2, 15);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 10;
        std::vector<double> u(n + 1);
        for (auto& v : u) v = r(g);
        const Equilibrium eq = solve_equilibrium(u);
        CHECK(eq.residual < 1e-10);
        CHECK(equilibrium_residual(eq.e, u) < 1e-10);
        for (std::size_t i = 0; i <= n; ++i) {
            const double in = i == 0 ? 1.0 : eq.e[i - 1];
            const double out = i == n ? 0.0 : eq.e[i];
            CHECK(u[i] * in * (1 - out) == doctest::Approx(eq.R_C).epsilon(1e-9));
        }
        for (double v : eq.e) CHECK((v > 0 && v < 1));
    }
}

TEST_CASE("random means agree with long-horizon integration") {
    std::mt19937_64 g(99);
    std::uniform_real_distribution<double> r(0.5, 10);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + trial % 5;
        std::vector<double> u(n + 1);
        for (auto& v : u) v = r(g);
        const Equilibrium eq = solve_equilibrium(u);
        const auto ref = oracle::settle(u, 200.0, 40000);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(eq.e[i] - ref[i]) < 1e-8);
    }
}

TEST_CASE("jammed chain") {
    const std::vector<double> u{1.0, 1.0, 1e-3, 1.0};
    const Equilibrium eq = solve_equilibrium(u);
    CHECK(eq.residual < 1e-12);
    CHECK(eq.e[0] > 0.95);
    CHECK(eq.e[1] > 0.95);
    CHECK(eq.e[2] < 0.01);
}

TEST_CASE("back-substitution") {
    const std::vector<double> u{3, 1, 4, 2};
    const Equilibrium eq = solve_equilibrium(u);
    const auto at = back_substitute(eq.R_C, u);
    REQUIRE(at.has_value());
    CHECK(std::abs(at->defect) < 1e-12);
    for (int i = 0; i < 3; ++i) CHECK(at->e[i] == doctest::Approx(eq.e[i]).epsilon(1e-12));
    // below the throughput the entry pushes more than the chain carries
    const auto low = back_substitute(0.5 * eq.R_C, u);
    REQUIRE(low.has_value());
    CHECK(low->defect > 0);
    CHECK_FALSE(back_substitute(2.0, u).has_value());
    CHECK_THROWS_AS(back_substitute(0.0, u), ContractViolation);
}

TEST_CASE("invalid means") {
    CHECK_THROWS_AS(solve_equilibrium(std::vector<double>{1.0, 0.0}), ContractViolation);
    CHECK_THROWS_AS(solve_equilibrium(std::vector<double>{1.0}), ContractViolation);
    CHECK_THROWS_AS(solve_equilibrium(std::vector<double>{1.0, -2.0, 1.0}), ContractViolation);
}
