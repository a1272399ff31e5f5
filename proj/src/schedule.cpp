#include "rfm/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>

#include "rfm/error.hpp"

namespace rfm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_structure(double period, std::vector<Signal>& channels) {
    if (!(period > 0.0 && std::isfinite(period))) throw ScheduleInvalid("schedule: period must be positive");
    if (channels.size() < 2) throw ScheduleInvalid("schedule: need at least two channels (n >= 1)");
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const std::string where = "channel " + std::to_string(i);
        if (!(channels[i].mean > 0.0 && std::isfinite(channels[i].mean)))
            throw ScheduleInvalid(where + ": mean must be positive");
        for (auto& h : channels[i].harmonics) {
            if (h.k < 1) throw ScheduleInvalid(where + ": harmonic index must be >= 1");
            if (!(h.amplitude >= 0.0 && std::isfinite(h.amplitude)))
                throw ScheduleInvalid(where + ": amplitude must be nonnegative");
            if (!std::isfinite(h.phase)) throw ScheduleInvalid(where + ": phase must be finite");
            h.phase = normalize_phase(h.phase);
        }
    }
}

// Complex Fourier coefficient per harmonic index: sum of A e^{i phi}.
std::map<int, std::complex<double>> coefficients(const Signal& s) {
    std::map<int, std::complex<double>> c;
    for (const auto& h : s.harmonics) c[h.k] += std::polar(h.amplitude, h.phase);
    return c;
}

} // namespace

double Signal::value(double t, double period) const {
    const double w = kTwoPi * t / period;
    double v = mean;
    for (const auto& h : harmonics) v += h.amplitude * std::cos(h.k * w + h.phase);
    return v;
}

double Signal::amplitude_sum() const noexcept {
    double s = 0.0;
    for (const auto& h : harmonics) s += h.amplitude;
    return s;
}

double normalize_phase(double phase) {
    double p = std::fmod(phase, kTwoPi);
    if (p < 0.0) p += kTwoPi;
    if (p >= kTwoPi) p = 0.0;
    return p;
}

RateSchedule::RateSchedule(Unchecked, double period, std::vector<Signal> channels)
    : period_(period), channels_(std::move(channels)) {
    check_structure(period_, channels_);
}

RateSchedule RateSchedule::unchecked(double period, std::vector<Signal> channels) {
    return RateSchedule(Unchecked{}, period, std::move(channels));
}

RateSchedule::RateSchedule(double period, std::vector<Signal> channels)
    : RateSchedule(Unchecked{}, period, std::move(channels)) {
    if (auto v = validate_positive(*this)) {
        throw ScheduleInvalid("channel " + std::to_string(v->channel) + ": rate not positive at t=" +
                              std::to_string(v->t) + " (value " + std::to_string(v->value) + ")");
    }
}

void RateSchedule::evaluate_into(double t, std::span<double> out) const {
    if (out.size() != channels_.size()) throw ContractViolation("evaluate_into: output size mismatch");
    const double phase_time = std::fmod(t, period_);
    for (std::size_t i = 0; i < channels_.size(); ++i) out[i] = channels_[i].value(phase_time, period_);
}

RateValues evaluate(const RateSchedule& schedule, double t) {
    std::vector<double> u(schedule.channel_count());
    schedule.evaluate_into(t, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(u[i] > 0.0))
            throw ScheduleInvalid("evaluate: channel " + std::to_string(i) + " not positive at t=" +
                                  std::to_string(t));
    }
    return RateValues(std::move(u));
}

std::vector<double> mean_rates(const RateSchedule& schedule) {
    std::vector<double> m;
    m.reserve(schedule.channel_count());
    for (const auto& c : schedule.channels()) m.push_back(c.mean);
    return m;
}

std::optional<PositivityViolation> validate_positive(const RateSchedule& schedule, int grid_points) {
    if (grid_points < 256) throw ContractViolation("validate_positive: grid_points must be >= 256");
    const double T = schedule.period();
    for (std::size_t i = 0; i < schedule.channel_count(); ++i) {
        const Signal& s = schedule.channel(i);
        if (s.mean > s.amplitude_sum()) continue;
        for (int m = 0; m < grid_points; ++m) {
            const double t = T * m / grid_points;
            const double v = s.value(t, T);
            if (!(v > 0.0)) return PositivityViolation{i, t, v};
        }
    }
    return std::nullopt;
}

std::optional<ProportionalityMap> detect_proportional_pairs(
    const RateSchedule& schedule, std::span<const std::pair<std::size_t, std::size_t>> pairing,
    double tolerance) {
    ProportionalityMap map;
    const double T = schedule.period();
    constexpr int kGrid = kDefaultPositivityGrid;

    for (const auto& [i, j] : pairing) {
        if (i >= schedule.channel_count() || j >= schedule.channel_count())
            throw ContractViolation("detect_proportional_pairs: index outside 0..n");
        const Signal& a = schedule.channel(i);
        const Signal& b = schedule.channel(j);
        const double alpha = a.mean / b.mean;

        double residual = 0.0;
        if (!(a.is_constant() && b.is_constant())) {
            for (int m = 0; m < kGrid; ++m) {
                const double t = T * m / kGrid;
                residual = std::max(residual, std::abs(a.value(t, T) - alpha * b.value(t, T)) / a.mean);
            }
        }

        auto ca = coefficients(a);
        const auto cb = coefficients(b);
        bool coefficients_match = true;
        for (const auto& [k, c] : cb) ca[k] -= alpha * c;
        for (const auto& [k, c] : ca) {
            if (std::abs(c) > tolerance * a.mean) {
                coefficients_match = false;
                break;
            }
        }
        if (!coefficients_match && residual > tolerance) return std::nullopt;

        map.pairing.emplace_back(i, j);
        map.alphas.push_back(alpha);
        map.residual = std::max(map.residual, residual);
    }
    return map;
}

} // namespace rfm
