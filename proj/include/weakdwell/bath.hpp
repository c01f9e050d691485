// bath.hpp — Finite equispaced bath coupled to one excited reference atom:
// fixed-step RK4 integration of the coupled amplitude equations
//   da0/dt = -i H sum_n a_n e^{-i n dE t},   da_n/dt = -i H a0 e^{+i n dE t}
// plus exponential-decay fitting and the dE -> 0 closed-form propagators.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "weakdwell/errors.hpp"
#include "weakdwell/qcore.hpp"

namespace weakdwell {

struct BathModel {
    int n_levels{1};      // N; bath levels n = -N..N, 2N+1 in total
    double delta_e{1.0};  // level spacing (hbar = 1)
    double coupling{0.0}; // H, equal coupling of every bath atom to the reference
};

inline void validate_model(const BathModel& model) {
    if (model.n_levels < 1) throw DomainError("bath: n_levels must be >= 1");
    if (!(model.delta_e > 0.0)) throw DomainError("bath: delta_e must be positive");
    if (model.coupling < 0.0) throw DomainError("bath: coupling must be non-negative");
}

struct BathRunOptions {
    int store_stride{1};  // keep every k-th step (t=0 and t=t_max always kept)
    bool force{false};    // bypass the step-size guard
};

struct AmplitudeTrajectory {
    BathModel model;
    std::vector<double> times;
    std::vector<Complex> a0;
    std::vector<double> total_norm;          // sum |a|^2 at each stored time
    std::vector<std::vector<Complex>> bath;  // bath[i][n + N]

    std::size_t size() const { return times.size(); }

    const Complex& bath_amp(std::size_t i, int n) const {
        if (i >= bath.size() || n < -model.n_levels || n > model.n_levels)
            throw DomainError("bath_amp: index out of range");
        return bath[i][static_cast<std::size_t>(n + model.n_levels)];
    }
};

namespace detail {

// Fixed-order pairwise reduction; keeps the bath sum reproducible and
// accurate for large level counts.
inline Complex pairwise_sum(std::span<const Complex> xs) {
    if (xs.size() <= 8) {
        Complex s{};
        for (const Complex& x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace detail

// Integrates from a0(0) = 1, a_n(0) = 0 up to t_max with a classical
// fixed-step 4th-order scheme. The interaction-picture phases are evaluated
// exactly at the stage times. Step-size guard: dt (N dE + H sqrt(N)) < 0.1.
inline AmplitudeTrajectory integrate_bath(const BathModel& model, double t_max, double dt,
                                          const BathRunOptions& options = {}) {
    validate_model(model);
    if (!(t_max > 0.0) || !(dt > 0.0)) throw DomainError("integrate_bath: t_max and dt must be positive");
    if (options.store_stride < 1) throw DomainError("integrate_bath: store_stride must be >= 1");
    const int n = model.n_levels;
    const double speed = n * model.delta_e + model.coupling * std::sqrt(static_cast<double>(n));
    if (!options.force && dt * speed >= 0.1)
        throw StepTooLarge("integrate_bath: dt * (N dE + H sqrt(N)) >= 0.1; shrink dt or set force");

    const std::size_t n_steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-12));
    const double h = t_max / static_cast<double>(n_steps);
    const std::size_t dim = 2 * static_cast<std::size_t>(n) + 2;  // a0 then a_{-N}..a_{N}

    std::vector<Complex> y(dim, Complex{});
    y[0] = 1.0;
    std::vector<Complex> k1(dim), k2(dim), k3(dim), k4(dim), scratch(dim), terms(dim - 1);
    std::vector<Complex> phase(dim - 1);  // e^{+i n dE t}, n = -N..N

    auto fill_phases = [&](double t) {
        for (int level = -n; level <= n; ++level)
            phase[static_cast<std::size_t>(level + n)] = std::polar(1.0, level * model.delta_e * t);
    };
    auto rhs = [&](const std::vector<Complex>& state, std::vector<Complex>& out) {
        for (std::size_t j = 0; j + 1 < dim; ++j) terms[j] = state[j + 1] * std::conj(phase[j]);
        out[0] = -kI * model.coupling * detail::pairwise_sum(terms);
        for (std::size_t j = 0; j + 1 < dim; ++j)
            out[j + 1] = -kI * model.coupling * state[0] * phase[j];
    };

    AmplitudeTrajectory traj{model, {}, {}, {}, {}};
    auto store = [&](double t) {
        traj.times.push_back(t);
        traj.a0.push_back(y[0]);
        double norm = 0.0;
        for (const Complex& v : y) norm += std::norm(v);
        traj.total_norm.push_back(norm);
        traj.bath.emplace_back(y.begin() + 1, y.end());
        if (std::abs(norm - 1.0) > 1e-6)
            throw NormDriftExceeded("integrate_bath: total probability drifted beyond 1e-6");
    };
    store(0.0);

    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t = h * static_cast<double>(step);
        fill_phases(t);
        rhs(y, k1);
        fill_phases(t + 0.5 * h);
        for (std::size_t j = 0; j < dim; ++j) scratch[j] = y[j] + 0.5 * h * k1[j];
        rhs(scratch, k2);
        for (std::size_t j = 0; j < dim; ++j) scratch[j] = y[j] + 0.5 * h * k2[j];
        rhs(scratch, k3);
        fill_phases(t + h);
        for (std::size_t j = 0; j < dim; ++j) scratch[j] = y[j] + h * k3[j];
        rhs(scratch, k4);
        for (std::size_t j = 0; j < dim; ++j)
            y[j] += (h / 6.0) * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]);
        const bool last = step + 1 == n_steps;
        if (last || (step + 1) % static_cast<std::size_t>(options.store_stride) == 0)
            store(last ? t_max : h * static_cast<double>(step + 1));
    }
    return traj;
}

struct DecayFit {
    double gamma{};               // least-squares rate of the model |a0| = e^{-gamma t}
    double t_start{}, t_end{};    // fit window
    double residual{};            // RMS of ln|a0| + gamma t over the window
};

// Fits the decay model ln|a0(t)| = -gamma t over the window. The trajectory
// starts from |a0(0)| = 1, so the model carries no intercept; a free-intercept
// regression would fold the finite-bath amplitude renormalization into gamma.
inline DecayFit fit_decay(const AmplitudeTrajectory& traj, double t_start, double t_end) {
    if (traj.size() < 2) throw WindowOutOfRange("fit_decay: trajectory too short");
    if (!(t_end > t_start) || t_start < traj.times.front() - 1e-12 ||
        t_end > traj.times.back() + 1e-12)
        throw WindowOutOfRange("fit_decay: window outside trajectory");

    std::vector<double> ts, logs;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.times[i];
        if (t < t_start || t > t_end) continue;
        const double mag = std::abs(traj.a0[i]);
        if (mag <= 1e-12) throw AmplitudeUnderflow("fit_decay: |a0| <= 1e-12 inside window");
        ts.push_back(t);
        logs.push_back(std::log(mag));
    }
    if (ts.size() < 2) throw WindowOutOfRange("fit_decay: fewer than two samples in window");

    double stt = 0.0, stl = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += ts[i] * ts[i];
        stl += ts[i] * logs[i];
    }
    if (stt <= 0.0) throw WindowOutOfRange("fit_decay: window has no usable time span");
    const double gamma = -stl / stt;
    double ss = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double r = logs[i] + gamma * ts[i];
        ss += r * r;
    }
    return {gamma, t_start, t_end, std::sqrt(ss / static_cast<double>(ts.size()))};
}

// dE -> 0 limiting propagators: U_00(t) = e^{-gamma t} for n = 0 and
// U_n0(t) = i H (e^{(-gamma + i n dE) t} - 1) / (gamma - i n dE) otherwise.
inline Complex closed_form_propagator(int n, double coupling, double gamma, double delta_e,
                                      double t) {
    if (!(gamma > 0.0)) throw DomainError("closed_form_propagator: gamma must be positive");
    if (t < 0.0) throw DomainError("closed_form_propagator: t must be >= 0");
    if (n == 0) return std::exp(-gamma * t);
    const Complex z{-gamma, n * delta_e};
    return kI * coupling * (std::exp(z * t) - 1.0) / (gamma - kI * (n * delta_e));
}

// Golden-rule decay constant pi H^2 / dE for the equispaced bath; used as a
// cross-check against the fitted gamma.
inline double golden_rule_gamma(const BathModel& model) {
    return M_PI * model.coupling * model.coupling / model.delta_e;
}

}  // namespace weakdwell
