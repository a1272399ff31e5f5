#include "rfm/builtin_scenarios.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace rfm::builtin {
namespace {

constexpr double kPi = std::numbers::pi;

struct Row {
    std::array<double, 5> amplitude;
    std::array<double, 5> phase;
};

// A_j, phi_j for rates j = 1..5, which drive channels 0..4.
constexpr std::array<Row, 7> kFourSiteRows{{
    {{8.42, 1.18, 1.30, 2.84, 2.25}, {1.18, 0.17, 4.03, 0.08, 3.42}},
    {{6.78, 4.87, 3.72, 0.78, 1.11}, {3.06, 5.77, 3.24, 1.61, 1.30}},
    {{5.06, 9.05, 1.08, 3.37, 1.67}, {5.91, 4.08, 5.78, 4.22, 5.95}},
    {{9.43, 0.88, 3.46, 3.15, 0.87}, {0.76, 1.73, 4.87, 6.16, 4.11}},
    {{6.54, 3.23, 3.14, 2.40, 1.19}, {2.02, 5.92, 5.57, 1.09, 1.64}},
    {{6.12, 1.26, 1.24, 1.01, 2.09}, {4.86, 4.43, 3.51, 1.69, 3.99}},
    {{2.87, 5.62, 3.03, 0.99, 1.91}, {0.40, 3.28, 5.37, 1.52, 1.66}},
}};

constexpr std::array<double, 5> kFourSiteMeans{13.56, 11.38, 3.90, 3.53, 2.34};

} // namespace

TanhDemoSystem tanh_demo() {
    // sin(2 pi t) = cos(2 pi t - pi/2)
    return TanhDemoSystem{Signal{0.0, {Harmonic{1, 1.0, normalize_phase(-kPi / 2)}}}, 1.0};
}

RateSchedule three_site_schedule() {
    // With T = 2 pi the k = 1 harmonic is cos(t + phase).
    std::vector<Signal> ch{
        Signal{3.0, {Harmonic{1, 1.0, normalize_phase(5.0)}}},
        Signal{1.0, {}},
        Signal{4.0, {Harmonic{1, 2.0, normalize_phase(-4.0 - kPi / 2)}}},  // 2 sin(t - 4)
        Signal{2.0, {Harmonic{1, 1.0, normalize_phase(kPi - 1.0)}}},       // -cos(t - 1)
    };
    return RateSchedule(2.0 * kPi, std::move(ch));
}

std::vector<BatchScenario> four_site_batch() {
    std::vector<BatchScenario> out;
    for (std::size_t r = 0; r < kFourSiteRows.size(); ++r) {
        std::vector<Signal> ch;
        for (std::size_t c = 0; c < 5; ++c)
            ch.push_back(Signal{kFourSiteMeans[c], {Harmonic{1, kFourSiteRows[r].amplitude[c], kFourSiteRows[r].phase[c]}}});
        out.push_back(BatchScenario{"sim" + std::to_string(r + 1), RateSchedule(1.0, std::move(ch))});
    }
    return out;
}

Scenario three_site_scenario() {
    const RateSchedule s = three_site_schedule();
    Scenario sc;
    sc.id = "paper_n3";
    sc.system = SystemKind::rfm;
    sc.n = 3;
    sc.T = s.period();
    sc.channels = s.channels();
    sc.x0 = std::vector<double>{0.3, 0.4, 0.5};
    sc.t_span = std::make_pair(0.0, 20.0 * kPi);
    return sc;
}

Scenario tanh_demo_scenario() {
    const TanhDemoSystem d = tanh_demo();
    Scenario sc;
    sc.id = "tanh_demo";
    sc.system = SystemKind::tanh_demo;
    sc.n = 1;
    sc.T = d.period;
    sc.channels = {d.input};
    sc.x0 = std::vector<double>{0.0};
    sc.t_span = std::make_pair(0.0, 70.0);
    return sc;
}

} // namespace rfm::builtin
