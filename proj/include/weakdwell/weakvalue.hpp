// weakvalue.hpp — Weak survival probabilities of the decaying excited state
// between pre- and post-selection, and their time integral (the weak dwell
// time).

#pragma once

#include <cmath>
#include <complex>

#include "weakdwell/errors.hpp"
#include "weakdwell/qcore.hpp"
#include "weakdwell/quadrature.hpp"

namespace weakdwell {

enum class PostSelectionKind {
    asymptotic,   // post-selected on the t -> infinity photon state
    finite_time,  // post-selected at finite t_f (resonant photon only)
};

struct PostSelectionSpec {
    PostSelectionKind kind{PostSelectionKind::asymptotic};
    int k{0};            // photon level index, E_k = k * delta_e
    double delta_e{0.0};
    double gamma{1.0};
    double t_i{0.0};
    double t_f{1.0};
};

inline void validate_spec(const PostSelectionSpec& spec) {
    if (!(spec.t_f > spec.t_i)) throw DomainError("post-selection: t_f must exceed t_i");
    if (!(spec.gamma > 0.0)) throw DomainError("post-selection: gamma must be positive");
    if (spec.kind == PostSelectionKind::finite_time && spec.k != 0)
        throw DomainError("post-selection: finite-time variant requires k = 0");
}

struct WeakSurvival {
    Complex value;
    double t{};
};

// e^{-gamma (t - t_i)} [1 - e^{(-gamma + i k dE)(t_f - t)}] /
//                      [1 - e^{(-gamma + i k dE)(t_f - t_i)}]
// Complex for k != 0; the k = 0 reduction is real.
inline WeakSurvival survival_weak_value(const PostSelectionSpec& spec, double t) {
    validate_spec(spec);
    if (t < spec.t_i || t > spec.t_f)
        throw DomainError("survival_weak_value: t outside [t_i, t_f]");
    const Complex z{-spec.gamma, spec.k * spec.delta_e};
    const Complex den = 1.0 - std::exp(z * (spec.t_f - spec.t_i));
    if (std::abs(den) <= 1e-12)
        throw DegenerateDenominator("survival_weak_value: 1 - e^{(-gamma + ik dE) T} below 1e-12");
    const Complex num = 1.0 - std::exp(z * (spec.t_f - t));
    return {std::exp(-spec.gamma * (t - spec.t_i)) * num / den, t};
}

// Finite-time post-selection variant:
// e^{-gamma (t - t_i)} [1 - e^{-2 gamma (t_f - t)}] / [1 - e^{-2 gamma (t_f - t_i)}]
inline WeakSurvival survival_weak_value_finite(const PostSelectionSpec& spec, double t) {
    validate_spec(spec);
    if (spec.kind != PostSelectionKind::finite_time)
        throw DomainError("survival_weak_value_finite: spec must have kind = finite_time");
    if (t < spec.t_i || t > spec.t_f)
        throw DomainError("survival_weak_value_finite: t outside [t_i, t_f]");
    const double den = 1.0 - std::exp(-2.0 * spec.gamma * (spec.t_f - spec.t_i));
    if (std::abs(den) <= 1e-12)
        throw DegenerateDenominator("survival_weak_value_finite: denominator below 1e-12");
    const double num = 1.0 - std::exp(-2.0 * spec.gamma * (spec.t_f - t));
    return {Complex{std::exp(-spec.gamma * (t - spec.t_i)) * num / den, 0.0}, t};
}

// Integral of the finite-time weak survival probability over [t_i, t_f].
// Adaptive Simpson to 1e-10 absolute; the exact antiderivative gives
// (1/gamma) tanh(gamma T / 2).
inline double weak_dwell_quadrature(const PostSelectionSpec& spec) {
    validate_spec(spec);
    if (spec.kind != PostSelectionKind::finite_time)
        throw DomainError("weak_dwell_quadrature: spec must have kind = finite_time");
    return adaptive_simpson(
        [&](double t) { return survival_weak_value_finite(spec, t).value.real(); }, spec.t_i,
        spec.t_f, 1e-10, 40);
}

}  // namespace weakdwell
