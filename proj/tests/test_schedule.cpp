#include <doctest.h>

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "oracle.hpp"
#include "rfm/builtin_scenarios.hpp"
#include "rfm/error.hpp"
#include "rfm/schedule.hpp"

using namespace rfm;
constexpr double pi = std::numbers::pi;

TEST_CASE("signal values") {
    const Signal s{3.0, {{1, 1.0, 5.0}}};
    for (double t : {0.0, 0.3, 1.7, 5.9})
        CHECK(s.value(t, 2 * pi) == doctest::Approx(3 + std::cos(t + 5)));
    const Signal two{1.0, {{2, 0.5, 0.0}, {3, 0.25, 1.0}}};
    CHECK(two.value(0.1, 1.0) == doctest::Approx(oracle::fourier(1.0, {{2, 0.5, 0.0}, {3, 0.25, 1.0}}, 0.1, 1.0)));
    CHECK(two.amplitude_sum() == 0.75);
    CHECK(Signal{2.0, {}}.is_constant());
}

TEST_CASE("three-site schedule matches its closed forms") {
    const RateSchedule s = builtin::three_site_schedule();
    CHECK(s.sites() == 3);
    CHECK(s.period() == doctest::Approx(2 * pi));
    for (double t : {0.0, 0.4, 2.5, 6.0}) {
        const RateValues u = evaluate(s, t);
        CHECK(u[0] == doctest::Approx(3 + std::cos(t + 5)));
        CHECK(u[1] == doctest::Approx(1.0));
        CHECK(u[2] == doctest::Approx(4 + 2 * std::sin(t - 4)));
        CHECK(u[3] == doctest::Approx(2 - std::cos(t - 1)));
    }
    const auto means = mean_rates(s);
    CHECK(means == std::vector<double>{3, 1, 4, 2});
}

TEST_CASE("periodicity") {
    const RateSchedule s = builtin::three_site_schedule();
    std::vector<double> a(4), b(4);
    for (double t : {0.1, 1.0, 3.3}) {
        s.evaluate_into(t, a);
        s.evaluate_into(t + 3 * s.period(), b);
        for (int c = 0; c < 4; ++c) CHECK(a[c] == doctest::Approx(b[c]).epsilon(1e-12));
    }
}

TEST_CASE("mean equals quadrature of the signal") {
    const Signal s{2.0, {{1, 0.9, 0.4}, {3, 0.3, 2.0}}};
    const int M = 1000;
    double sum = 0;
    for (int m = 0; m < M; ++m) sum += s.value(1.5 * m / M, 1.5);
    CHECK(sum / M == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("normalize_phase") {
    CHECK(normalize_phase(7.0) == doctest::Approx(7.0 - 2 * pi));
    CHECK(normalize_phase(-0.5) == doctest::Approx(2 * pi - 0.5));
    CHECK(normalize_phase(0.0) == 0.0);
    const double p = normalize_phase(2 * pi);
    CHECK((p >= 0.0 && p < 2 * pi));
}

TEST_CASE("schedule validation") {
    CHECK_THROWS_AS(RateSchedule(0.0, {{1, {}}, {1, {}}}), ScheduleInvalid);
    CHECK_THROWS_AS(RateSchedule(1.0, {{1, {}}}), ScheduleInvalid);
    CHECK_THROWS_AS(RateSchedule(1.0, {{0.0, {}}, {1, {}}}), ScheduleInvalid);
    CHECK_THROWS_AS(RateSchedule(1.0, {{1, {{0, 0.1, 0}}}, {1, {}}}), ScheduleInvalid);
    CHECK_THROWS_AS(RateSchedule(1.0, {{1, {{1, -0.1, 0}}}, {1, {}}}), ScheduleInvalid);
    // mean 1, amplitude 1: touches zero at one phase
    CHECK_THROWS_AS(RateSchedule(1.0, {{1, {{1, 1.0, 0}}}, {1, {}}}), ScheduleInvalid);

    const auto bad = RateSchedule::unchecked(1.0, {{1.0, {}}, {1.0, {{1, 1.5, 0.0}}}});
    const auto v = validate_positive(bad);
    REQUIRE(v.has_value());
    CHECK(v->channel == 1);
    CHECK(v->value <= 0.0);
    CHECK_THROWS_AS(validate_positive(bad, 16), ContractViolation);

    // Amplitudes summing past the mean can still be positive everywhere.
    const auto ok = RateSchedule::unchecked(1.0, {{1.0, {{1, 0.6, 0.0}, {2, 0.6, 0.0}}}, {1.0, {}}});
    CHECK_FALSE(validate_positive(ok).has_value());
    CHECK_NOTHROW(evaluate(bad, 0.0));
    CHECK_THROWS_AS(evaluate(bad, 0.5), ScheduleInvalid);
}

TEST_CASE("proportional pairs") {
    const Signal base{2.0, {{1, 0.5, 0.3}, {2, 0.2, 1.1}}};
    Signal scaled{6.0, {{1, 1.5, 0.3}, {2, 0.6, 1.1}}};
    const RateSchedule s(1.0, {scaled, base, {1.0, {}}, {2.0, {}}});
    const std::vector<std::pair<std::size_t, std::size_t>> p01{{0, 1}};
    auto m = detect_proportional_pairs(s, p01);
    REQUIRE(m.has_value());
    CHECK(m->alphas[0] == doctest::Approx(3.0));
    CHECK(m->residual < 1e-12);

    // same function with a phase shifted by a full turn
    Signal turned{6.0, {{1, 1.5, 0.3 + 2 * pi}, {2, 0.6, 1.1}}};
    const RateSchedule s2(1.0, {turned, base, {1.0, {}}});
    CHECK(detect_proportional_pairs(s2, p01).has_value());

    // constants pair trivially
    const std::vector<std::pair<std::size_t, std::size_t>> p23{{2, 3}};
    CHECK(detect_proportional_pairs(s, p23).has_value());

    // 1% perturbation of one amplitude
    Signal off = scaled;
    off.harmonics[0].amplitude *= 1.01;
    const RateSchedule s3(1.0, {off, base, {1.0, {}}});
    CHECK_FALSE(detect_proportional_pairs(s3, p01).has_value());

    const std::vector<std::pair<std::size_t, std::size_t>> p12{{1, 2}};
    CHECK_FALSE(detect_proportional_pairs(s, p12).has_value());
}
