#include "rfm/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "rfm/error.hpp"
#include "rfm/kernels/kernels.hpp"
#include "stepper.hpp"

namespace rfm {

double StepConfig::step_for(double period) const {
    if (fixed_step) return *fixed_step;
    return period / steps_per_period;
}

void StepConfig::validate() const {
    if (steps_per_period < 1) throw ContractViolation("StepConfig: steps_per_period must be >= 1");
    if (fixed_step && !(*fixed_step > 0.0)) throw ContractViolation("StepConfig: fixed_step must be positive");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ContractViolation("StepConfig: tolerances must be positive");
    if (max_step && !(*max_step > 0.0)) throw ContractViolation("StepConfig: max_step must be positive");
}

std::size_t state_dimension(const System& system) {
    if (const auto* rfm = std::get_if<RfmSystem>(&system)) return rfm->schedule.sites();
    return 1;
}

double system_period(const System& system) {
    if (const auto* rfm = std::get_if<RfmSystem>(&system)) return rfm->schedule.period();
    return std::get<TanhDemoSystem>(system).period;
}

namespace detail {

Problem::Problem(const System& system, const std::vector<Accumulator>& accumulators)
    : system_(system),
      acc_(accumulators),
      n_(state_dimension(system)),
      channels_(std::holds_alternative<RfmSystem>(system) ? n_ + 1 : 1),
      period_(system_period(system)),
      is_rfm_(std::holds_alternative<RfmSystem>(system)) {
    if (!(period_ > 0.0)) throw ContractViolation("system period must be positive");
    for (const auto& a : acc_) {
        if (a.integrand == Integrand::density && (a.site < 1 || a.site > n_))
            throw ContractViolation("accumulator '" + a.name + "': site outside 1..n");
    }
}

void Problem::rates_at(double t, double* u) const {
    const double phase_time = std::fmod(t, period_);
    if (const auto* rfm = std::get_if<RfmSystem>(&system_)) {
        rfm->schedule.evaluate_into(phase_time, std::span<double>(u, channels_));
    } else {
        const auto& demo = std::get<TanhDemoSystem>(system_);
        u[0] = demo.input.value(phase_time, demo.period);
    }
}

void Problem::derivative(const double* y, const double* u, double* dy) const {
    if (is_rfm_) {
        kernels::active().site_field(y, u, dy, n_);
    } else {
        dy[0] = tanh_demo_field(y[0], u[0]);
    }
    for (std::size_t a = 0; a < acc_.size(); ++a) {
        const Accumulator& acc = acc_[a];
        double v;
        if (acc.integrand == Integrand::production)
            v = is_rfm_ ? u[n_] * y[n_ - 1] : y[0];
        else
            v = y[acc.site - 1];
        dy[n_ + a] = v;
    }
}

double Problem::clamp(double* y) const {
    if (!is_rfm_) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double c = std::clamp(y[i], 0.0, 1.0);
        worst = std::max(worst, std::abs(c - y[i]));
        y[i] = c;
    }
    return worst;
}

void Problem::validate_initial(std::span<const double> x0) const {
    if (x0.size() != n_)
        throw ContractViolation("initial state has " + std::to_string(x0.size()) + " components, expected " +
                                std::to_string(n_));
    for (std::size_t i = 0; i < n_; ++i) {
        if (is_rfm_ ? !(x0[i] >= 0.0 && x0[i] <= 1.0) : !(x0[i] >= 0.0))
            throw ContractViolation("initial state component " + std::to_string(i + 1) + " outside the state space");
    }
}

GridStepper::GridStepper(const System& system, int steps_per_period, const std::vector<Accumulator>& accumulators)
    : problem_(system, accumulators), m_(steps_per_period) {
    if (m_ < 1) throw ContractViolation("steps_per_period must be >= 1");
    h_ = problem_.period() / m_;
    const std::size_t c = problem_.channels();
    table_.resize(2 * static_cast<std::size_t>(m_) * c);
    for (long j = 0; j < 2L * m_; ++j) {
        const double t = problem_.period() * static_cast<double>(j) / (2.0 * m_);
        problem_.rates_at(t, table_.data() + j * c);
    }
    const std::size_t d = problem_.dimension();
    k1_.resize(d);
    k2_.resize(d);
    k3_.resize(d);
    k4_.resize(d);
    tmp_.resize(d);
}

std::span<const double> GridStepper::rates_at_grid(long step_index) const {
    const long rows = 2L * m_;
    long j = (2 * step_index) % rows;
    if (j < 0) j += rows;
    return std::span<const double>(table_).subspan(j * problem_.channels(), problem_.channels());
}

double GridStepper::step(double* y, long step_index) {
    const std::size_t c = problem_.channels();
    const std::size_t d = problem_.dimension();
    const long rows = 2L * m_;
    long j0 = (2 * step_index) % rows;
    if (j0 < 0) j0 += rows;
    const double* u0 = table_.data() + j0 * c;
    const double* um = table_.data() + ((j0 + 1) % rows) * c;
    const double* u1 = table_.data() + ((j0 + 2) % rows) * c;
    const auto& k = kernels::active();

    problem_.derivative(y, u0, k1_.data());
    k.axpy(0.5 * h_, k1_.data(), y, tmp_.data(), d);
    problem_.derivative(tmp_.data(), um, k2_.data());
    k.axpy(0.5 * h_, k2_.data(), y, tmp_.data(), d);
    problem_.derivative(tmp_.data(), um, k3_.data());
    k.axpy(h_, k3_.data(), y, tmp_.data(), d);
    problem_.derivative(tmp_.data(), u1, k4_.data());
    k.rk4_update(h_, k1_.data(), k2_.data(), k3_.data(), k4_.data(), y, d);
    return problem_.clamp(y);
}

} // namespace detail

namespace {

void record(Trajectory& tr, double t, const std::vector<double>& y, std::size_t n) {
    tr.times.push_back(t);
    tr.states.insert(tr.states.end(), y.begin(), y.begin() + static_cast<long>(n));
    tr.accumulators.insert(tr.accumulators.end(), y.begin() + static_cast<long>(n), y.end());
}

Trajectory start_trajectory(const detail::Problem& p, const std::vector<Accumulator>& accumulators) {
    Trajectory tr;
    tr.dimension = p.states();
    for (const auto& a : accumulators) tr.accumulator_names.push_back(a.name);
    return tr;
}

bool near_integer(double v, long& out) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 * std::max(1.0, std::abs(v))) return false;
    out = static_cast<long>(r);
    return true;
}

// Fixed RK4 on an arbitrary step (used when the step does not tile the period).
void fixed_direct(const detail::Problem& p, std::vector<double>& y, double t0, long steps, double h,
                  Trajectory& tr) {
    const std::size_t d = p.dimension();
    std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d), u0(p.channels()), um(p.channels()), u1(p.channels());
    const auto& k = kernels::active();
    for (long s = 0; s < steps; ++s) {
        const double t = t0 + static_cast<double>(s) * h;
        p.rates_at(t, u0.data());
        p.rates_at(t + 0.5 * h, um.data());
        p.rates_at(t + h, u1.data());
        p.derivative(y.data(), u0.data(), k1.data());
        k.axpy(0.5 * h, k1.data(), y.data(), tmp.data(), d);
        p.derivative(tmp.data(), um.data(), k2.data());
        k.axpy(0.5 * h, k2.data(), y.data(), tmp.data(), d);
        p.derivative(tmp.data(), um.data(), k3.data());
        k.axpy(h, k3.data(), y.data(), tmp.data(), d);
        p.derivative(tmp.data(), u1.data(), k4.data());
        k.rk4_update(h, k1.data(), k2.data(), k3.data(), k4.data(), y.data(), d);
        tr.max_clamp = std::max(tr.max_clamp, p.clamp(y.data()));
        record(tr, t0 + static_cast<double>(s + 1) * h, y, p.states());
    }
}

// Dormand-Prince 5(4).
void adaptive(const detail::Problem& p, std::vector<double>& y, double t0, double t1, const StepConfig& cfg,
              Trajectory& tr) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t d = p.dimension();
    std::array<std::vector<double>, 7> k;
    for (auto& v : k) v.resize(d);
    std::vector<double> tmp(d), ynew(d), u(p.channels());

    auto eval = [&](double t, const std::vector<double>& state, std::vector<double>& out) {
        p.rates_at(t, u.data());
        p.derivative(state.data(), u.data(), out.data());
    };
    auto stage = [&](double t, double h, std::initializer_list<std::pair<double, const std::vector<double>*>> terms,
                     std::vector<double>& out) {
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (const auto& [a, kv] : terms) s += a * (*kv)[i];
            tmp[i] = y[i] + h * s;
        }
        eval(t, tmp, out);
    };

    const double max_step = cfg.max_step.value_or(p.period() / 64.0);
    double t = t0;
    double h = std::min(max_step, (t1 - t0) / 100.0);
    eval(t, y, k[0]);
    while (t < t1) {
        if (t + h > t1) h = t1 - t;
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw IntegrationFailure("adaptive step size underflow at t=" + std::to_string(t), t);

        stage(t + c2 * h, h, {{a21, &k[0]}}, k[1]);
        stage(t + c3 * h, h, {{a31, &k[0]}, {a32, &k[1]}}, k[2]);
        stage(t + c4 * h, h, {{a41, &k[0]}, {a42, &k[1]}, {a43, &k[2]}}, k[3]);
        stage(t + c5 * h, h, {{a51, &k[0]}, {a52, &k[1]}, {a53, &k[2]}, {a54, &k[3]}}, k[4]);
        stage(t + h, h, {{a61, &k[0]}, {a62, &k[1]}, {a63, &k[2]}, {a64, &k[3]}, {a65, &k[4]}}, k[5]);
        for (std::size_t i = 0; i < d; ++i)
            ynew[i] = y[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] + b6 * k[5][i]);
        eval(t + h, ynew, k[6]);

        double err = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                                  e7 * k[6][i]);
            const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(e) / scale);
        }
        if (!std::isfinite(err))
            throw IntegrationFailure("non-finite state at t=" + std::to_string(t), t);

        if (err <= 1.0) {
            t = (t1 - t - h <= 1e-15 * std::max(1.0, std::abs(t1))) ? t1 : t + h;
            y.swap(ynew);
            tr.max_clamp = std::max(tr.max_clamp, p.clamp(y.data()));
            record(tr, t, y, p.states());
            eval(t, y, k[0]);
        }
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = std::min(max_step, h * factor);
    }
}

} // namespace

Trajectory integrate(const System& system, std::span<const double> x0, double t0, double t1, const StepConfig& cfg,
                     const std::vector<Accumulator>& accumulators) {
    cfg.validate();
    if (!(t1 > t0)) throw ContractViolation("integrate: t1 must exceed t0");
    const double T = system_period(system);

    if (cfg.method == Method::adaptive_embedded) {
        detail::Problem p(system, accumulators);
        p.validate_initial(x0);
        std::vector<double> y(x0.begin(), x0.end());
        y.resize(p.dimension(), 0.0);
        Trajectory tr = start_trajectory(p, accumulators);
        record(tr, t0, y, p.states());
        adaptive(p, y, t0, t1, cfg, tr);
        return tr;
    }

    const double h_nominal = cfg.step_for(T);
    long steps = 0;
    long start = 0;
    long per_period = 0;
    const bool on_grid = near_integer((t1 - t0) / h_nominal, steps) && near_integer(t0 / h_nominal, start) &&
                         near_integer(T / h_nominal, per_period) && per_period >= 1 && steps >= 1;

    if (on_grid) {
        detail::GridStepper stepper(system, static_cast<int>(per_period), accumulators);
        const auto& p = stepper.problem();
        p.validate_initial(x0);
        std::vector<double> y(x0.begin(), x0.end());
        y.resize(p.dimension(), 0.0);
        Trajectory tr = start_trajectory(p, accumulators);
        tr.times.reserve(static_cast<std::size_t>(steps) + 1);
        record(tr, t0, y, p.states());
        const double h = stepper.step();
        for (long s = 0; s < steps; ++s) {
            tr.max_clamp = std::max(tr.max_clamp, stepper.step(y.data(), start + s));
            const double t = s + 1 == steps ? t1 : static_cast<double>(start + s + 1) * h;
            record(tr, t, y, p.states());
        }
        return tr;
    }

    detail::Problem p(system, accumulators);
    p.validate_initial(x0);
    std::vector<double> y(x0.begin(), x0.end());
    y.resize(p.dimension(), 0.0);
    Trajectory tr = start_trajectory(p, accumulators);
    const long n_steps = std::max(1L, static_cast<long>(std::ceil((t1 - t0) / h_nominal - 1e-9)));
    const double h = (t1 - t0) / static_cast<double>(n_steps);
    record(tr, t0, y, p.states());
    fixed_direct(p, y, t0, n_steps, h, tr);
    tr.times.back() = t1;
    return tr;
}

std::vector<double> advance_period(const System& system, std::span<const double> x0, const StepConfig& cfg) {
    cfg.validate();
    const double T = system_period(system);
    if (cfg.method == Method::adaptive_embedded) {
        const Trajectory tr = integrate(system, x0, 0.0, T, cfg);
        const auto last = tr.final_state();
        return {last.begin(), last.end()};
    }
    long per_period = 0;
    if (!near_integer(T / cfg.step_for(T), per_period) || per_period < 1) {
        const Trajectory tr = integrate(system, x0, 0.0, T, cfg);
        const auto last = tr.final_state();
        return {last.begin(), last.end()};
    }
    detail::GridStepper stepper(system, static_cast<int>(per_period));
    stepper.problem().validate_initial(x0);
    std::vector<double> y(x0.begin(), x0.end());
    for (long s = 0; s < per_period; ++s) stepper.step(y.data(), s);
    return y;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
    out << "t";
    for (std::size_t i = 1; i <= tr.dimension; ++i) out << ",x" << i;
    for (const auto& name : tr.accumulator_names) out << ",acc_" << name;
    out << "\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (std::size_t k = 0; k < tr.samples(); ++k) {
        put(tr.times[k]);
        for (double v : tr.state(k)) {
            out << ",";
            put(v);
        }
        for (std::size_t a = 0; a < tr.accumulator_names.size(); ++a) {
            out << ",";
            put(tr.accumulator(k, a));
        }
        out << "\n";
    }
}

} // namespace rfm
