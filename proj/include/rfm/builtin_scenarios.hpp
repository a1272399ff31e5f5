#pragma once
// Reference scenarios bundled with the tool (also shipped as JSON under
// scenarios/).

#include <vector>

#include "rfm/analysis.hpp"
#include "rfm/integrator.hpp"
#include "rfm/scenario.hpp"

namespace rfm::builtin {

/// x' = 1 - 1.5 tanh(x) + sin(2 pi t), T = 1.
TanhDemoSystem tanh_demo();

/// n = 3, T = 2 pi: u_0 = 3 + cos(t + 5), u_1 = 1, u_2 = 4 + 2 sin(t - 4),
/// u_3 = 2 - cos(t - 1).
RateSchedule three_site_schedule();

/// Seven n = 4, T = 1 schedules u_c = mean_c + A cos(2 pi t + phi) sharing the
/// means (13.56, 11.38, 3.90, 3.53, 2.34).
std::vector<BatchScenario> four_site_batch();

Scenario three_site_scenario();
Scenario tanh_demo_scenario();

} // namespace rfm::builtin
