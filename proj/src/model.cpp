#include "rfm/model.hpp"

#include <cmath>
#include <string>

#include "rfm/error.hpp"
#include "rfm/kernels/kernels.hpp"

namespace rfm {

RfmState::RfmState(std::vector<double> x) : x_(std::move(x)) {
    if (x_.empty()) throw ContractViolation("RfmState: at least one site is required");
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (!(x_[i] >= 0.0 && x_[i] <= 1.0))
            throw ContractViolation("RfmState: x_" + std::to_string(i + 1) + " outside [0,1]");
    }
}

RateValues::RateValues(std::vector<double> u) : u_(std::move(u)) {
    if (u_.size() < 2) throw ContractViolation("RateValues: need at least u_0 and u_1");
    for (std::size_t i = 0; i < u_.size(); ++i) {
        if (!(u_[i] > 0.0 && std::isfinite(u_[i])))
            throw ContractViolation("RateValues: u_" + std::to_string(i) + " must be positive");
    }
}

ShiftedState::ShiftedState(std::vector<double> z, std::vector<double> e)
    : z_(std::move(z)), e_(std::move(e)) {
    if (z_.empty() || z_.size() != e_.size())
        throw ContractViolation("ShiftedState: z and e must be non-empty and of equal length");
    for (std::size_t i = 0; i < z_.size(); ++i) {
        const double x = z_[i] + e_[i];
        if (!(x >= 0.0 && x <= 1.0))
            throw ContractViolation("ShiftedState: z_" + std::to_string(i + 1) + " + e_" +
                                    std::to_string(i + 1) + " outside [0,1]");
    }
}

void rfm_field(std::span<const double> x, std::span<const double> u, std::span<double> dx) {
    if (u.size() != x.size() + 1 || dx.size() != x.size())
        throw ContractViolation("rfm_field: expected " + std::to_string(x.size() + 1) + " rates for " +
                                std::to_string(x.size()) + " sites, got " + std::to_string(u.size()));
    kernels::active().site_field(x.data(), u.data(), dx.data(), x.size());
}

std::vector<double> rfm_vector_field(const RfmState& state, const RateValues& rates) {
    std::vector<double> dx(state.size());
    rfm_field(state.values(), rates.values(), dx);
    return dx;
}

std::vector<double> shifted_vector_field(const ShiftedState& state, const RateValues& rates) {
    const std::size_t n = state.size();
    if (rates.size() != n + 1)
        throw ContractViolation("shifted_vector_field: expected " + std::to_string(n + 1) + " rates, got " +
                                std::to_string(rates.size()));
    const auto z = state.z();
    const auto e = state.e();
    // Index 0 and n+1 carry z = 0 with e_0 = 1, e_{n+1} = 0.
    auto z_at = [&](std::size_t i) { return i == 0 || i == n + 1 ? 0.0 : z[i - 1]; };
    auto e_at = [&](std::size_t i) { return i == 0 ? 1.0 : i == n + 1 ? 0.0 : e[i - 1]; };

    std::vector<double> dz(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double in = rates[i - 1] * (z_at(i - 1) + e_at(i - 1)) * (1.0 - z_at(i) - e_at(i));
        const double out = rates[i] * (z_at(i) + e_at(i)) * (1.0 - z_at(i + 1) - e_at(i + 1));
        dz[i - 1] = in - out;
    }
    return dz;
}

double tanh_demo_field(double x, double u) { return 1.0 - 1.5 * std::tanh(x) + u; }

double tanh_demo_equilibrium(double u) {
    const double target = (1.0 + u) / 1.5;
    if (!(target >= 0.0 && target < 1.0))
        throw ContractViolation("tanh_demo_equilibrium: constant input must lie in [-1, 0.5)");
    return std::atanh(target);
}

} // namespace rfm
