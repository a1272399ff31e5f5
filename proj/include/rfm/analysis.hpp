#pragma once
// Gain-of-entrainment analysis: structural no-GOE conditions, verdicts and
// batch runs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rfm/equilibrium.hpp"
#include "rfm/orbit.hpp"
#include "rfm/schedule.hpp"

namespace rfm {

/// Structural conditions under which no GOE is possible.
///   I   n odd,  u_i = a_i u_{i+1} for i = 1, 3, ..., n-2
///   II  n even, u_i = a_i u_{i+1} for i = 0, 2, ..., n-2
///   III n even, u_i = a_i u_{i+1} for i = 1, 3, ..., n-1
///   IV  n odd,  u_1..u_{n-1} constant
///   V   n even, u_0..u_{n-1} constant
///   VI  n even, u_1..u_n constant
enum class Condition { I, II, III, IV, V, VI };

inline constexpr Condition kAllConditions[] = {Condition::I,  Condition::II, Condition::III,
                                               Condition::IV, Condition::V,  Condition::VI};

std::string_view to_string(Condition c);
std::optional<Condition> parse_condition(std::string_view s);

/// Parity a condition requires: true for odd n.
bool requires_odd(Condition c);

/// Pairs (i, i+1) for I-III; empty for IV-VI.
std::vector<std::pair<std::size_t, std::size_t>> condition_pairs(Condition c, std::size_t n);

/// Channels required constant for IV-VI; empty for I-III.
std::vector<std::size_t> condition_constant_channels(Condition c, std::size_t n);

struct ConditionResult {
    Condition condition;
    bool holds = false;
    bool parity_ok = false;
    std::optional<ProportionalityMap> proportionality;  ///< evidence for I-III
    std::vector<std::size_t> constant_channels;         ///< evidence for IV-VI
};

std::vector<ConditionResult> check_theorem_conditions(const RateSchedule& schedule,
                                                      double tolerance = kDefaultProportionalityTolerance);

enum class Classification {
    no_goe_predicted_and_confirmed,
    no_goe_predicted_violated,
    unconstrained_no_goe_observed,
    unconstrained_goe_observed,
};

std::string_view to_string(Classification c);

struct GoeVerdict {
    double R_P = 0.0;
    double R_C = 0.0;
    double goe_gap = 0.0;
    double tolerance = 0.0;   ///< gap-sign tolerance 1e-6 max(1, R_C)
    std::vector<ConditionResult> matched_conditions;
    Classification classification = Classification::unconstrained_no_goe_observed;
    bool degenerate = false;
};

double gap_tolerance(double R_C);

GoeVerdict classify(const MomentReport& report, std::vector<ConditionResult> conditions);

struct GoeAnalysis {
    Equilibrium equilibrium;
    PeriodicOrbit orbit;
    MomentReport moments;
    GoeVerdict verdict;
};

/// equilibrium -> orbit -> moments -> conditions -> verdict.
GoeAnalysis analyze_goe(const RateSchedule& schedule, const OrbitConfig& cfg = {});

/// The tanh demo counterpart: average output on the orbit vs the equilibrium.
struct DemoAnalysis {
    double equilibrium = 0.0;
    double mean_output = 0.0;
    double goe_gap = 0.0;
    PeriodicOrbit orbit;
};

DemoAnalysis analyze_demo(const TanhDemoSystem& system, const OrbitConfig& cfg = {});

struct BatchScenario {
    std::string id;
    RateSchedule schedule;
};

struct BatchRow {
    std::string id;
    std::size_t n = 0;
    double T = 0.0;
    std::optional<GoeAnalysis> analysis;
    int zn_sign_changes = 0;
    std::string error;   ///< non-empty when the scenario failed

    bool ok() const noexcept { return analysis.has_value(); }
};

/// Runs analyze_goe per scenario on up to `jobs` threads (0: hardware
/// concurrency). Rows come back sorted by scenario id; failures are recorded
/// in the row and the batch continues.
std::vector<BatchRow> run_batch(const std::vector<BatchScenario>& scenarios, const OrbitConfig& cfg = {},
                                unsigned jobs = 0);

/// Seeded random schedule: means in [0.5, 20.5], 1-3 harmonics per channel
/// with total amplitude below the mean, phases in [0, 2 pi). With a condition,
/// the matching structure is imposed. Throws std::invalid_argument on a
/// parity mismatch.
RateSchedule random_scenario(std::size_t n, std::optional<Condition> condition, std::uint64_t seed,
                             double period = 1.0);

} // namespace rfm
