// pointer.hpp — Gaussian measurement pointer on a 1D grid: von Neumann
// coupling at finite strength and the moment readouts of the weak value.

#pragma once

#include <cmath>
#include <vector>

#include "weakdwell/errors.hpp"
#include "weakdwell/qcore.hpp"

namespace weakdwell {

struct PointerGrid {
    double q_min{-12.0};
    double q_max{12.0};
    int n_points{1024};

    double dq() const { return (q_max - q_min) / (n_points - 1); }
    double q(int i) const { return q_min + i * dq(); }
};

inline void validate_grid(const PointerGrid& grid) {
    if (grid.n_points < 64) throw DomainError("pointer grid needs n_points >= 64");
    if (!(grid.q_max > grid.q_min)) throw DomainError("pointer grid needs q_max > q_min");
}

// Trapezoidal sum of f(i) over the grid.
template <typename F>
double trapezoid(const PointerGrid& grid, F&& f) {
    double s = 0.5 * (f(0) + f(grid.n_points - 1));
    for (int i = 1; i + 1 < grid.n_points; ++i) s += f(i);
    return s * grid.dq();
}

struct PointerWavefunction {
    PointerGrid grid;
    std::vector<Complex> amplitudes;
    double width{1.0};  // Delta of the generating Gaussian

    double norm_squared() const {
        return trapezoid(grid, [&](int i) { return std::norm(amplitudes[i]); });
    }

    PointerWavefunction renormalized() const {
        const double n2 = norm_squared();
        if (std::sqrt(n2) < 1e-14)
            throw DegenerateWavefunction("renormalized: pointer norm below 1e-14");
        PointerWavefunction out = *this;
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& a : out.amplitudes) a *= inv;
        return out;
    }
};

// (Delta^2 pi)^{-1/4} e^{-Q^2 / 2 Delta^2} sampled on the grid.
inline PointerWavefunction gaussian_pointer(const PointerGrid& grid, double delta) {
    validate_grid(grid);
    if (!(delta > 0.0)) throw DomainError("gaussian_pointer: width must be positive");
    if (grid.q_min > -8.0 * delta || grid.q_max < 8.0 * delta)
        throw GridTooNarrow("gaussian_pointer: grid must span at least [-8 Delta, +8 Delta]");
    PointerWavefunction wf{grid, std::vector<Complex>(grid.n_points), delta};
    const double amp = std::pow(delta * delta * M_PI, -0.25);
    for (int i = 0; i < grid.n_points; ++i) {
        const double q = grid.q(i);
        wf.amplitudes[i] = amp * std::exp(-q * q / (2.0 * delta * delta));
    }
    return wf;
}

struct PointerMoments {
    double mean_q{};
    double mean_p{};  // hbar = 1
};

// <Q> by trapezoidal quadrature, <P> = Im Int Phi* dPhi/dQ via central
// differences (one-sided at the ends, where the amplitude is negligible).
inline PointerMoments pointer_moments(const PointerWavefunction& wf) {
    const int n = wf.grid.n_points;
    const double dq = wf.grid.dq();
    const double n2 = wf.norm_squared();
    if (std::sqrt(n2) < 1e-14)
        throw DegenerateWavefunction("pointer_moments: pointer norm below 1e-14");
    const double mean_q =
        trapezoid(wf.grid, [&](int i) { return wf.grid.q(i) * std::norm(wf.amplitudes[i]); }) / n2;
    auto derivative = [&](int i) -> Complex {
        if (i == 0) return (wf.amplitudes[1] - wf.amplitudes[0]) / dq;
        if (i == n - 1) return (wf.amplitudes[n - 1] - wf.amplitudes[n - 2]) / dq;
        return (wf.amplitudes[i + 1] - wf.amplitudes[i - 1]) / (2.0 * dq);
    };
    const double mean_p =
        trapezoid(wf.grid,
                  [&](int i) { return (std::conj(wf.amplitudes[i]) * derivative(i)).imag(); }) /
        n2;
    return {mean_q, mean_p};
}

struct MeasurementOutcome {
    PointerWavefunction final_pointer;  // unnormalized post-selected pointer
    double final_norm{};                // its L2 norm
    double mean_q{};
    double mean_p{};
    double post_selection_probability{};
};

// Impulsive coupling exp(-i g P A) on a Gaussian pointer followed by spin
// post-selection: Phi_f(Q) = sum_k <post|a_k><a_k|pre> Phi_i(Q - g a_k).
// The pointer must be a Gaussian of width `pointer.width` (as produced by
// gaussian_pointer); the shifted copies are evaluated analytically.
inline MeasurementOutcome weak_measure(const SpinState& pre, const SpinState& post,
                                       const Operator2& op, double g,
                                       const PointerWavefunction& pointer) {
    if (!is_hermitian(op)) throw NonHermitianOperator("weak_measure: observable must be Hermitian");
    const EigenSystem2 eig = eigen_hermitian(op);
    const Complex w0 = inner(post, eig.v0) * inner(eig.v0, pre);
    const Complex w1 = inner(post, eig.v1) * inner(eig.v1, pre);

    const double delta = pointer.width;
    const double amp = std::pow(delta * delta * M_PI, -0.25);
    PointerWavefunction final_wf{pointer.grid, std::vector<Complex>(pointer.grid.n_points), delta};
    auto shifted = [&](double q, double shift) {
        return amp * std::exp(-(q - shift) * (q - shift) / (2.0 * delta * delta));
    };
    for (int i = 0; i < pointer.grid.n_points; ++i) {
        const double q = pointer.grid.q(i);
        final_wf.amplitudes[i] =
            w0 * shifted(q, g * eig.lambda0) + w1 * shifted(q, g * eig.lambda1);
    }

    const double n2 = final_wf.norm_squared();
    if (std::sqrt(n2) < 1e-14)
        throw NearOrthogonalPostSelection("weak_measure: post-selected pointer norm below 1e-14");
    const PointerMoments moments = pointer_moments(final_wf);
    return {std::move(final_wf), std::sqrt(n2), moments.mean_q, moments.mean_p, n2};
}

}  // namespace weakdwell
