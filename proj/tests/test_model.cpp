#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "rfm/error.hpp"
#include "rfm/model.hpp"

using namespace rfm;

TEST_CASE("field at a hand-computed point") {
    // n = 2, x = (0.5, 0.25), u = (1, 2, 3):
    // dx1 = 1*1*0.5 - 2*0.5*0.75 = -0.25, dx2 = 2*0.5*0.75 - 3*0.25 = 0
    const auto dx = rfm_vector_field(RfmState({0.5, 0.25}), RateValues({1, 2, 3}));
    CHECK(dx[0] == doctest::Approx(-0.25));
    CHECK(dx[1] == doctest::Approx(0.0));
}

TEST_CASE("empty and full boundaries") {
    const auto empty = rfm_vector_field(RfmState({0, 0, 0}), RateValues({2, 1, 1, 1}));
    CHECK(empty[0] == 2.0);
    CHECK(empty[1] == 0.0);
    CHECK(empty[2] == 0.0);
    const auto full = rfm_vector_field(RfmState({1, 1, 1}), RateValues({2, 1, 1, 3}));
    CHECK(full[0] == 0.0);
    CHECK(full[1] == 0.0);
    CHECK(full[2] == -3.0);
}

TEST_CASE("mass balance: sum of dx is inflow minus outflow") {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> d(0, 1), r(0.1, 10);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 9;
        std::vector<double> x(n), u(n + 1);
        for (auto& v : x) v = d(g);
        for (auto& v : u) v = r(g);
        const auto dx = rfm_vector_field(RfmState(x), RateValues(u));
        double sum = 0;
        for (double v : dx) sum += v;
        CHECK(sum == doctest::Approx(u[0] * (1 - x[0]) - u[n] * x[n - 1]).epsilon(1e-12));
    }
}

TEST_CASE("shifted field equals the unshifted field") {
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> d(0, 1), r(0.1, 10);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 7;
        std::vector<double> x(n), e(n), z(n), u(n + 1);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = d(g);
            e[i] = d(g);
            z[i] = x[i] - e[i];
        }
        for (auto& v : u) v = r(g);
        const auto a = rfm_vector_field(RfmState(x), RateValues(u));
        const auto b = shifted_vector_field(ShiftedState(z, e), RateValues(u));
        for (std::size_t i = 0; i < n; ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-12).scale(1));
    }
}

TEST_CASE("raw field agrees with the oracle") {
    const std::vector<double> x{0.1, 0.9, 0.4, 0.6}, u{1.3, 0.2, 5.0, 2.2, 0.7};
    std::vector<double> dx(4);
    rfm_field(x, u, dx);
    const auto ref = oracle::rfm_field(x, u);
    for (int i = 0; i < 4; ++i) CHECK(dx[i] == doctest::Approx(ref[i]));
}

TEST_CASE("contract violations") {
    CHECK_THROWS_AS(RfmState({}), ContractViolation);
    CHECK_THROWS_AS(RfmState({0.5, 1.2}), ContractViolation);
    CHECK_THROWS_AS(RfmState({-0.1}), ContractViolation);
    CHECK_THROWS_AS(RateValues({1.0}), ContractViolation);
    CHECK_THROWS_AS(RateValues({1.0, 0.0}), ContractViolation);
    CHECK_THROWS_AS(rfm_vector_field(RfmState({0.5}), RateValues({1, 2, 3})), ContractViolation);
    std::vector<double> x{0.5}, u{1.0}, dx(1);
    CHECK_THROWS_AS(rfm_field(x, u, dx), ContractViolation);
}

TEST_CASE("tanh demo") {
    CHECK(tanh_demo_field(0.0, 0.0) == 1.0);
    const double e = tanh_demo_equilibrium(0.0);
    CHECK(e == doctest::Approx(std::atanh(2.0 / 3.0)));
    CHECK(e == doctest::Approx(0.8047).epsilon(5e-4));
    CHECK(std::abs(tanh_demo_field(e, 0.0)) < 1e-15);
    CHECK_THROWS_AS(tanh_demo_equilibrium(0.5), ContractViolation);
    CHECK_THROWS_AS(tanh_demo_equilibrium(-1.5), ContractViolation);
}
