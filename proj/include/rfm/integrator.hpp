#pragma once
// Deterministic integration of the RFM or the tanh demo, with running
// integrals carried as extra ODE components.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rfm/schedule.hpp"

namespace rfm {

enum class Method { fixed_rk4, adaptive_embedded };

inline constexpr int kDefaultStepsPerPeriod = 4096;

struct StepConfig {
    Method method = Method::fixed_rk4;
    /// Fixed step is T / steps_per_period unless fixed_step is given.
    int steps_per_period = kDefaultStepsPerPeriod;
    std::optional<double> fixed_step;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    /// Adaptive mode only; defaults to T / 64.
    std::optional<double> max_step;

    double step_for(double period) const;
    void validate() const;

    friend bool operator==(const StepConfig&, const StepConfig&) = default;
};

struct RfmSystem {
    RateSchedule schedule;
};

/// x' = 1 - (3/2) tanh(x) + u(t), state space x >= 0.
struct TanhDemoSystem {
    Signal input;
    double period = 1.0;
};

using System = std::variant<RfmSystem, TanhDemoSystem>;

std::size_t state_dimension(const System& system);
double system_period(const System& system);

enum class Integrand {
    production, ///< u_n x_n for the RFM, the output y = x for the demo
    density,    ///< x_site (1-based)
};

struct Accumulator {
    std::string name;
    Integrand integrand = Integrand::production;
    std::size_t site = 0;
};

struct Trajectory {
    std::size_t dimension = 0;
    std::vector<double> times;
    std::vector<double> states; ///< row-major, samples x dimension
    std::vector<std::string> accumulator_names;
    std::vector<double> accumulators; ///< row-major, samples x accumulator count
    /// Largest correction applied by post-step clamping to [0,1].
    double max_clamp = 0.0;

    std::size_t samples() const noexcept { return times.size(); }
    std::span<const double> state(std::size_t k) const {
        return std::span<const double>(states).subspan(k * dimension, dimension);
    }
    std::span<const double> final_state() const { return state(samples() - 1); }
    double accumulator(std::size_t k, std::size_t a) const {
        return accumulators[k * accumulator_names.size() + a];
    }
    double final_accumulator(std::size_t a) const { return accumulator(samples() - 1, a); }
};

/// Integrates from x0 at t0 to t1. Fixed mode samples every step, adaptive
/// mode every accepted step; both include t0 and t1.
Trajectory integrate(const System& system, std::span<const double> x0, double t0, double t1,
                     const StepConfig& cfg = {}, const std::vector<Accumulator>& accumulators = {});

/// The period map P(x0) = x(T) for the solution starting at phase 0.
std::vector<double> advance_period(const System& system, std::span<const double> x0,
                                   const StepConfig& cfg = {});

/// CSV with header t,x1..xn,acc_<name>..., 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

} // namespace rfm
