#pragma once
// Internal RK4 stepper on the uniform grid h = T / M. Rates are tabulated at
// the 2M half-step phases of one period, so every stage looks its rates up by
// index instead of re-evaluating the Fourier series.

#include <cstddef>
#include <span>
#include <vector>

#include "rfm/integrator.hpp"

namespace rfm::detail {

/// Right-hand side of the augmented system: state, then accumulators.
class Problem {
public:
    Problem(const System& system, const std::vector<Accumulator>& accumulators);

    std::size_t states() const noexcept { return n_; }
    std::size_t dimension() const noexcept { return n_ + acc_.size(); }
    std::size_t channels() const noexcept { return channels_; }
    double period() const noexcept { return period_; }
    bool clamps() const noexcept { return is_rfm_; }

    void rates_at(double t, double* u) const;
    void derivative(const double* y, const double* u, double* dy) const;

    /// Clamps RFM densities into [0,1]; returns the largest correction.
    double clamp(double* y) const;

    void validate_initial(std::span<const double> x0) const;

private:
    System system_;
    std::vector<Accumulator> acc_;
    std::size_t n_;
    std::size_t channels_;
    double period_;
    bool is_rfm_;
};

class GridStepper {
public:
    GridStepper(const System& system, int steps_per_period, const std::vector<Accumulator>& accumulators = {});

    const Problem& problem() const noexcept { return problem_; }
    double step() const noexcept { return h_; }
    int steps_per_period() const noexcept { return m_; }

    /// One RK4 step from grid index `step_index` (time step_index * h).
    /// Returns the clamp correction.
    double step(double* y, long step_index);

    std::span<const double> rates_at_grid(long step_index) const;

private:
    Problem problem_;
    int m_;
    double h_;
    std::vector<double> table_; ///< 2M rows of `channels` rates
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

} // namespace rfm::detail
