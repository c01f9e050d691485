// retarded.hpp — Retarded (finite time-step) dynamics for the spin-1/2
// system: exact complex-logarithm generator with a stabilized ground state,
// its third-order expansion, and the (omega, delta) <-> (omega', gamma)
// parameter algebra.

#pragma once

#include <cmath>
#include <complex>

#include "weakdwell/errors.hpp"
#include "weakdwell/qcore.hpp"

namespace weakdwell {

struct RetardedParams {
    double omega{1.0};  // eB/2m, hbar = 1
    double delta{0.0};  // retardation time scale (chronon)

    // The third-order closed forms degrade once (2 omega delta)^2 >= 0.5;
    // the exact generator stays valid.
    bool expansion_suspect() const {
        const double x = 2.0 * omega * delta;
        return x * x >= 0.5;
    }
};

struct EffectiveParams {
    double omega_prime{};  // modified precession frequency
    double gamma{};        // retardation-induced decay rate
};

// alpha = (1/delta) ln(1 + i (H - H0) delta) with H - H0 = 2 omega diag(1, 0);
// principal branch (1 + 2 i omega delta sits in the right half-plane).
inline Operator2 retarded_generator(double omega, double delta) {
    if (!(delta > 0.0)) throw DomainError("retarded_generator: delta must be positive");
    const Complex alpha_up = std::log(1.0 + 2.0 * kI * omega * delta) / delta;
    return Operator2::diagonal(alpha_up, 0.0);
}

struct RetardedEvolution {
    Complex up;
    Complex down;
    double survival_norm{};  // norm of the unnormalized evolved vector

    SpinState normalized() const { return SpinState{up, down}.normalized(); }
};

// Applies e^{-alpha t}: the upper component picks up (1 + 2 i omega delta)^{-t/delta}
// (modulus (1 + 4 omega^2 delta^2)^{-t/2delta}), the ground component is untouched.
inline RetardedEvolution retarded_evolve(const SpinState& state0, double omega, double delta,
                                         double t) {
    if (!(delta > 0.0)) throw DomainError("retarded_evolve: delta must be positive");
    if (t < 0.0) throw DomainError("retarded_evolve: t must be >= 0");
    const Complex factor = std::exp(-(t / delta) * std::log(1.0 + 2.0 * kI * omega * delta));
    const Complex up = state0.up * factor;
    const double norm = std::sqrt(std::norm(up) + std::norm(state0.down));
    return {up, state0.down, norm};
}

// Third-order expansion of the generator: omega' = 2 omega (1 - 4 omega^2 delta^2 / 3),
// gamma = 2 omega^2 delta. Exact at delta = 0.
inline EffectiveParams effective_params(double omega, double delta) {
    if (delta < 0.0) throw DomainError("effective_params: delta must be >= 0");
    const double x = omega * delta;
    return {2.0 * omega * (1.0 - 4.0 * x * x / 3.0), 2.0 * omega * omega * delta};
}

struct RetardationScales {
    double delta{};
    double gamma{};
};

// Inverts the third-order relation: delta = (1/2 omega) sqrt(3 (1 - omega'/2 omega)),
// gamma = 2 omega^2 delta. Requires omega' <= 2 omega for a real root.
inline RetardationScales delta_gamma_from_frequencies(double omega, double omega_prime) {
    if (!(omega > 0.0)) throw DomainError("delta_gamma_from_frequencies: omega must be positive");
    if (omega_prime > 2.0 * omega)
        throw DomainError(
            "delta_gamma_from_frequencies: omega_prime > 2 omega has no real retardation scale");
    const double root = std::sqrt(3.0 * (1.0 - omega_prime / (2.0 * omega)));
    const double delta = root / (2.0 * omega);
    return {delta, 2.0 * omega * omega * delta};
}

}  // namespace weakdwell
