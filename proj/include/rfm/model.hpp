#pragma once
// Ribosome flow model vector field, its form shifted around an equilibrium,
// and the scalar tanh demonstration system.

#include <cstddef>
#include <span>
#include <vector>

namespace rfm {

/// Site densities x_1..x_n, each in [0,1]. The boundary values x_0 = 1 and
/// x_{n+1} = 0 are implied by the field evaluation and never stored.
class RfmState {
public:
    explicit RfmState(std::vector<double> x);

    std::size_t size() const noexcept { return x_.size(); }
    std::span<const double> values() const noexcept { return x_; }
    double operator[](std::size_t i) const { return x_[i]; }

private:
    std::vector<double> x_;
};

/// Instantaneous transition rates u_0..u_n, all strictly positive.
class RateValues {
public:
    explicit RateValues(std::vector<double> u);

    /// Number of sites served by these rates (size() - 1).
    std::size_t sites() const noexcept { return u_.size() - 1; }
    std::size_t size() const noexcept { return u_.size(); }
    std::span<const double> values() const noexcept { return u_; }
    double operator[](std::size_t i) const { return u_[i]; }

private:
    std::vector<double> u_;
};

/// z = x - e around a reference equilibrium e; z_0 = z_{n+1} = 0 implied.
class ShiftedState {
public:
    ShiftedState(std::vector<double> z, std::vector<double> e);

    std::size_t size() const noexcept { return z_.size(); }
    std::span<const double> z() const noexcept { return z_; }
    std::span<const double> e() const noexcept { return e_; }

private:
    std::vector<double> z_;
    std::vector<double> e_;
};

std::vector<double> rfm_vector_field(const RfmState& state, const RateValues& rates);

/// Evaluated through the shifted equations directly, not via z + e.
std::vector<double> shifted_vector_field(const ShiftedState& state, const RateValues& rates);

/// Raw field used by the integrator: dx must have x.size() entries and u one more.
void rfm_field(std::span<const double> x, std::span<const double> u, std::span<double> dx);

/// dx/dt = 1 - (3/2) tanh(x) + u.
double tanh_demo_field(double x, double u);

/// Equilibrium of the tanh demo for a constant input u: atanh((1 + u) / 1.5).
/// Requires -1 <= u < 0.5 so that the equilibrium lies in [0, inf).
double tanh_demo_equilibrium(double u);

} // namespace rfm
