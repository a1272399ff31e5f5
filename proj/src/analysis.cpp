#include "rfm/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "rfm/error.hpp"
#include "rfm/model.hpp"

namespace rfm {

std::string_view to_string(Condition c) {
    switch (c) {
    case Condition::I: return "I";
    case Condition::II: return "II";
    case Condition::III: return "III";
    case Condition::IV: return "IV";
    case Condition::V: return "V";
    case Condition::VI: return "VI";
    }
    return "?";
}

std::optional<Condition> parse_condition(std::string_view s) {
    for (Condition c : kAllConditions)
        if (to_string(c) == s) return c;
    return std::nullopt;
}

bool requires_odd(Condition c) { return c == Condition::I || c == Condition::IV; }

std::vector<std::pair<std::size_t, std::size_t>> condition_pairs(Condition c, std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t first = 0, last = 0;
    switch (c) {
    case Condition::I:
        if (n < 3) return pairs;
        first = 1, last = n - 2;
        break;
    case Condition::II:
        if (n < 2) return pairs;
        first = 0, last = n - 2;
        break;
    case Condition::III:
        first = 1, last = n - 1;
        break;
    default: return pairs;
    }
    for (std::size_t i = first; i <= last; i += 2) pairs.emplace_back(i, i + 1);
    return pairs;
}

std::vector<std::size_t> condition_constant_channels(Condition c, std::size_t n) {
    std::vector<std::size_t> ch;
    std::size_t first = 0, last = 0;
    switch (c) {
    case Condition::IV:
        if (n < 2) return ch;
        first = 1, last = n - 1;
        break;
    case Condition::V: first = 0, last = n - 1; break;
    case Condition::VI: first = 1, last = n; break;
    default: return ch;
    }
    for (std::size_t i = first; i <= last; ++i) ch.push_back(i);
    return ch;
}

std::vector<ConditionResult> check_theorem_conditions(const RateSchedule& schedule, double tolerance) {
    const std::size_t n = schedule.sites();
    const bool odd = n % 2 == 1;
    std::vector<ConditionResult> out;
    for (Condition c : kAllConditions) {
        ConditionResult r{c, false, false, std::nullopt, {}};
        r.parity_ok = requires_odd(c) == odd;
        if (c == Condition::I || c == Condition::II || c == Condition::III) {
            const auto pairs = condition_pairs(c, n);
            r.proportionality = detect_proportional_pairs(schedule, pairs, tolerance);
            r.holds = r.parity_ok && r.proportionality.has_value();
        } else {
            const auto required = condition_constant_channels(c, n);
            bool all = true;
            for (std::size_t i : required) {
                if (schedule.channel(i).is_constant())
                    r.constant_channels.push_back(i);
                else
                    all = false;
            }
            r.holds = r.parity_ok && all;
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string_view to_string(Classification c) {
    switch (c) {
    case Classification::no_goe_predicted_and_confirmed: return "no_goe_predicted_and_confirmed";
    case Classification::no_goe_predicted_violated: return "no_goe_predicted_VIOLATED";
    case Classification::unconstrained_no_goe_observed: return "unconstrained_no_goe_observed";
    case Classification::unconstrained_goe_observed: return "unconstrained_goe_observed";
    }
    return "?";
}

double gap_tolerance(double R_C) { return 1e-6 * std::max(1.0, R_C); }

GoeVerdict classify(const MomentReport& report, std::vector<ConditionResult> conditions) {
    GoeVerdict v;
    v.R_P = report.R_P;
    v.R_C = report.R_C;
    v.goe_gap = report.goe_gap;
    v.tolerance = gap_tolerance(report.R_C);
    v.degenerate = report.degenerate();
    for (auto& c : conditions)
        if (c.holds) v.matched_conditions.push_back(std::move(c));
    const bool goe = v.goe_gap > v.tolerance;
    if (!v.matched_conditions.empty())
        v.classification = goe ? Classification::no_goe_predicted_violated
                               : Classification::no_goe_predicted_and_confirmed;
    else
        v.classification = goe ? Classification::unconstrained_goe_observed
                               : Classification::unconstrained_no_goe_observed;
    return v;
}

GoeAnalysis analyze_goe(const RateSchedule& schedule, const OrbitConfig& cfg) {
    GoeAnalysis a;
    a.equilibrium = solve_equilibrium(mean_rates(schedule));
    a.orbit = find_periodic_orbit(RfmSystem{schedule}, cfg, std::span<const double>(a.equilibrium.e));
    a.moments = compute_moments(a.orbit, schedule, a.equilibrium);
    a.verdict = classify(a.moments, check_theorem_conditions(schedule));
    return a;
}

DemoAnalysis analyze_demo(const TanhDemoSystem& system, const OrbitConfig& cfg) {
    DemoAnalysis d;
    d.equilibrium = tanh_demo_equilibrium(system.input.mean);
    d.orbit = find_periodic_orbit(system, cfg);
    d.mean_output = d.orbit.mean_production;
    d.goe_gap = d.mean_output - d.equilibrium;
    return d;
}

std::vector<BatchRow> run_batch(const std::vector<BatchScenario>& scenarios, const OrbitConfig& cfg,
                                unsigned jobs) {
    std::vector<BatchRow> rows(scenarios.size());
    auto run_one = [&](std::size_t idx) {
        const auto& s = scenarios[idx];
        BatchRow& row = rows[idx];
        row.id = s.id;
        row.n = s.schedule.sites();
        row.T = s.schedule.period();
        try {
            GoeAnalysis a = analyze_goe(s.schedule, cfg);
            std::vector<double> zn(a.orbit.gamma.back());
            for (double& v : zn) v -= a.equilibrium.e.back();
            row.zn_sign_changes = cyclic_sign_changes(zn);
            row.analysis = std::move(a);
        } catch (const std::exception& ex) {
            row.error = ex.what();
        }
    };

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, scenarios.size())));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < scenarios.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < jobs; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < scenarios.size(); i = next++) run_one(i);
            });
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const BatchRow& a, const BatchRow& b) { return a.id < b.id; });
    return rows;
}

namespace {

Signal random_signal(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Signal s;
    s.mean = 0.5 + 20.0 * unit(rng);
    const int count = 1 + static_cast<int>(unit(rng) * 3.0) % 3;
    // Total amplitude strictly inside (0, mean) keeps the channel positive.
    const double total = s.mean * (0.05 + 0.9 * unit(rng));
    std::vector<double> weights(count);
    double wsum = 0.0;
    for (double& w : weights) wsum += (w = 0.1 + unit(rng));
    std::vector<int> ks{1, 2, 3};
    std::shuffle(ks.begin(), ks.end(), rng);
    for (int h = 0; h < count; ++h) {
        const double phase = 2.0 * std::numbers::pi * unit(rng);
        s.harmonics.push_back(Harmonic{ks[h], total * weights[h] / wsum, normalize_phase(phase)});
    }
    std::sort(s.harmonics.begin(), s.harmonics.end(), [](const Harmonic& a, const Harmonic& b) { return a.k < b.k; });
    return s;
}

} // namespace

RateSchedule random_scenario(std::size_t n, std::optional<Condition> condition, std::uint64_t seed, double period) {
    if (n < 1) throw std::invalid_argument("random_scenario: n must be >= 1");
    if (condition && requires_odd(*condition) != (n % 2 == 1))
        throw std::invalid_argument("random_scenario: condition " + std::string(to_string(*condition)) +
                                    " requires " + (requires_odd(*condition) ? "odd" : "even") + " n");

    std::mt19937_64 rng(seed);
    std::vector<Signal> channels;
    for (std::size_t i = 0; i <= n; ++i) channels.push_back(random_signal(rng));

    if (condition) {
        for (const auto& [i, j] : condition_pairs(*condition, n)) {
            const double alpha = channels[i].mean / channels[j].mean;
            channels[i].harmonics = channels[j].harmonics;
            for (auto& h : channels[i].harmonics) h.amplitude *= alpha;
        }
        for (std::size_t i : condition_constant_channels(*condition, n)) channels[i].harmonics.clear();
    }
    return RateSchedule(period, std::move(channels));
}

} // namespace rfm
