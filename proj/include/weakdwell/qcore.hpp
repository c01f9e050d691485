// qcore.hpp — Two-level state/operator algebra, precession unitaries and
// the static and time-extended weak-value kernels.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "weakdwell/errors.hpp"

namespace weakdwell {

using Complex = std::complex<double>;

// Post-selection overlap cutoff, relative to the state norms. Below this the
// weak-value denominator is treated as a blow-up rather than a number.
inline constexpr double kOverlapEpsilon = 1e-10;

constexpr Complex kI{0.0, 1.0};

struct SpinState {
    Complex up{1.0, 0.0};
    Complex down{0.0, 0.0};

    double norm() const { return std::sqrt(std::norm(up) + std::norm(down)); }

    SpinState normalized() const {
        const double n = norm();
        if (n < 1e-300) throw DegenerateWavefunction("cannot normalize zero spin state");
        return {up / n, down / n};
    }

    static SpinState z_plus() { return {1.0, 0.0}; }
    static SpinState z_minus() { return {0.0, 1.0}; }
    static SpinState x_plus() { return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}; }
    static SpinState x_minus() { return {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)}; }
    static SpinState y_plus() { return {1.0 / std::sqrt(2.0), kI / std::sqrt(2.0)}; }
    static SpinState y_minus() { return {1.0 / std::sqrt(2.0), -kI / std::sqrt(2.0)}; }
};

// <bra|ket>
inline Complex inner(const SpinState& bra, const SpinState& ket) {
    return std::conj(bra.up) * ket.up + std::conj(bra.down) * ket.down;
}

// 2x2 complex matrix, row-major entries.
struct Operator2 {
    Complex m00{}, m01{};
    Complex m10{}, m11{};

    static Operator2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Operator2 diagonal(Complex a, Complex b) { return {a, 0.0, 0.0, b}; }
    static Operator2 sigma_x() { return {0.0, 1.0, 1.0, 0.0}; }
    static Operator2 sigma_y() { return {0.0, -kI, kI, 0.0}; }
    static Operator2 sigma_z() { return {1.0, 0.0, 0.0, -1.0}; }

    // |s><s|
    static Operator2 projector(const SpinState& s) {
        return {s.up * std::conj(s.up), s.up * std::conj(s.down),
                s.down * std::conj(s.up), s.down * std::conj(s.down)};
    }

    SpinState apply(const SpinState& s) const {
        return {m00 * s.up + m01 * s.down, m10 * s.up + m11 * s.down};
    }

    Operator2 adjoint() const {
        return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
    }
};

inline Operator2 operator*(const Operator2& a, const Operator2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

inline Operator2 operator*(Complex c, const Operator2& a) {
    return {c * a.m00, c * a.m01, c * a.m10, c * a.m11};
}

inline Operator2 operator+(const Operator2& a, const Operator2& b) {
    return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
}

inline Operator2 operator-(const Operator2& a, const Operator2& b) {
    return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
}

inline double max_abs_entry(const Operator2& a) {
    return std::max(std::max(std::abs(a.m00), std::abs(a.m01)),
                    std::max(std::abs(a.m10), std::abs(a.m11)));
}

inline bool is_hermitian(const Operator2& a, double tol = 1e-12) {
    const double scale = std::max(1.0, max_abs_entry(a));
    return std::abs(a.m00 - std::conj(a.m00)) <= tol * scale &&
           std::abs(a.m11 - std::conj(a.m11)) <= tol * scale &&
           std::abs(a.m01 - std::conj(a.m10)) <= tol * scale;
}

// Eigensystem of a Hermitian 2x2 operator. Eigenvectors are orthonormal,
// eigenvalues real, lambda0 <= lambda1.
struct EigenSystem2 {
    double lambda0{}, lambda1{};
    SpinState v0, v1;
};

inline EigenSystem2 eigen_hermitian(const Operator2& a, double tol = 1e-12) {
    if (!is_hermitian(a, tol)) throw NonHermitianOperator("eigen_hermitian: operator is not Hermitian");
    const double p = a.m00.real();
    const double q = a.m11.real();
    const Complex b = a.m01;
    const double scale = std::max(1.0, max_abs_entry(a));
    if (std::abs(b) <= 1e-15 * scale) {
        if (p <= q) return {p, q, SpinState::z_plus(), SpinState::z_minus()};
        return {q, p, SpinState::z_minus(), SpinState::z_plus()};
    }
    const double half_gap = 0.5 * (p - q);
    const double disc = std::hypot(half_gap, std::abs(b));
    const double lo = 0.5 * (p + q) - disc;
    const double hi = 0.5 * (p + q) + disc;
    // (b, lambda - p) solves (A - lambda I) v = 0 for either eigenvalue.
    const SpinState vlo = SpinState{b, Complex(lo - p, 0.0)}.normalized();
    const SpinState vhi = SpinState{b, Complex(hi - p, 0.0)}.normalized();
    return {lo, hi, vlo, vhi};
}

struct PrecessionParams {
    double omega{1.0};  // eB/2m, hbar = 1
};

// U(t) = diag(e^{+i omega t/2}, e^{-i omega t/2}).
inline Operator2 precession_unitary(const PrecessionParams& params, double t) {
    if (!std::isfinite(t) || !std::isfinite(params.omega))
        throw DomainError("precession_unitary: non-finite input");
    const double phase = 0.5 * params.omega * t;
    return Operator2::diagonal(std::polar(1.0, phase), std::polar(1.0, -phase));
}

// <post|op|pre> / <post|pre>. Complex in general; can lie outside the
// operator's eigenvalue range.
inline Complex weak_value(const SpinState& pre, const SpinState& post, const Operator2& op) {
    const Complex overlap = inner(post, pre);
    if (std::abs(overlap) <= kOverlapEpsilon * pre.norm() * post.norm())
        throw NearOrthogonalPostSelection("weak_value: post-selection nearly orthogonal to pre-selection");
    return inner(post, op.apply(pre)) / overlap;
}

// Propagator over a duration. Callers must satisfy evolve(0) = identity;
// non-unitary propagators (decay) are allowed.
using Propagator = std::function<Operator2(double)>;

// <post|U(t_f-t) op U(t-t_i)|pre> / <post|U(t_f-t_i)|pre>
inline Complex time_dependent_weak_value(const SpinState& pre, const SpinState& post,
                                         const Operator2& op, double t_i, double t, double t_f,
                                         const Propagator& evolve) {
    if (t < t_i || t > t_f)
        throw DomainError("time_dependent_weak_value: t outside [t_i, t_f]");
    const Complex den = inner(post, evolve(t_f - t_i).apply(pre));
    if (std::abs(den) <= kOverlapEpsilon * pre.norm() * post.norm())
        throw NearOrthogonalPostSelection("time_dependent_weak_value: evolved overlap nearly zero");
    const SpinState mid = op.apply(evolve(t - t_i).apply(pre));
    const Complex num = inner(post, evolve(t_f - t).apply(mid));
    return num / den;
}

}  // namespace weakdwell
