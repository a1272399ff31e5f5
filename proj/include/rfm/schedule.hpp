#pragma once
// T-periodic transition rates represented as finite Fourier series.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rfm/model.hpp"

namespace rfm {

/// amplitude * cos(2 pi k t / T + phase)
struct Harmonic {
    int k = 1;
    double amplitude = 0.0;
    double phase = 0.0;

    friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

/// A constant mean plus a list of harmonics. Used for rate channels and for
/// the (sign-unrestricted) tanh demo input.
struct Signal {
    double mean = 0.0;
    std::vector<Harmonic> harmonics;

    double value(double t, double period) const;
    bool is_constant() const noexcept { return harmonics.empty(); }
    double amplitude_sum() const noexcept;

    friend bool operator==(const Signal&, const Signal&) = default;
};

/// Wraps a phase into [0, 2 pi).
double normalize_phase(double phase);

/// Positive, jointly T-periodic rates u_0..u_n.
class RateSchedule {
public:
    /// Validates structure and strict positivity; throws ScheduleInvalid.
    RateSchedule(double period, std::vector<Signal> channels);

    /// Validates structure only (period, means, harmonic indices). Positivity
    /// can then be checked with validate_positive.
    static RateSchedule unchecked(double period, std::vector<Signal> channels);

    double period() const noexcept { return period_; }
    std::size_t sites() const noexcept { return channels_.size() - 1; }
    std::size_t channel_count() const noexcept { return channels_.size(); }
    const std::vector<Signal>& channels() const noexcept { return channels_; }
    const Signal& channel(std::size_t i) const { return channels_.at(i); }

    /// Writes u_0(t)..u_n(t) into out without positivity checks.
    void evaluate_into(double t, std::span<double> out) const;

    friend bool operator==(const RateSchedule&, const RateSchedule&) = default;

private:
    struct Unchecked {};
    RateSchedule(Unchecked, double period, std::vector<Signal> channels);

    double period_;
    std::vector<Signal> channels_;
};

/// u(t); throws ScheduleInvalid if some channel is not positive at t.
RateValues evaluate(const RateSchedule& schedule, double t);

/// Exact channel averages (the Fourier constant terms).
std::vector<double> mean_rates(const RateSchedule& schedule);

struct PositivityViolation {
    std::size_t channel;
    double t;
    double value;
};

inline constexpr int kDefaultPositivityGrid = 4096;

/// nullopt when every channel is strictly positive. A channel passes outright
/// when mean > sum of amplitudes; otherwise its minimum over a uniform grid of
/// grid_points samples must be positive. grid_points >= 256.
std::optional<PositivityViolation> validate_positive(const RateSchedule& schedule,
                                                     int grid_points = kDefaultPositivityGrid);

struct ProportionalityMap {
    std::vector<std::pair<std::size_t, std::size_t>> pairing;
    std::vector<double> alphas;
    double residual = 0.0;
};

inline constexpr double kDefaultProportionalityTolerance = 1e-9;

/// Checks u_i(t) = alpha_i u_{i+1}(t) for every pair (i, i+1), with
/// alpha_i = mean_i / mean_{i+1}. Harmonic coefficients are compared first;
/// a grid residual decides when they differ.
std::optional<ProportionalityMap> detect_proportional_pairs(
    const RateSchedule& schedule, std::span<const std::pair<std::size_t, std::size_t>> pairing,
    double tolerance = kDefaultProportionalityTolerance);

} // namespace rfm
