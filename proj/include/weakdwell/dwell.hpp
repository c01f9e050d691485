// dwell.hpp — End-to-end weak dwell time: from pre/post-selected frequencies
// (omega, omega') and window T to gamma, delta and the dwell time, with the
// quadrature value reported alongside both closed-form variants.

#pragma once

#include <cmath>
#include <variant>

#include "weakdwell/errors.hpp"
#include "weakdwell/retarded.hpp"
#include "weakdwell/weakvalue.hpp"

namespace weakdwell {

struct DwellRequest {
    double omega{1.0};
    double omega_prime{-1.0};
    double window{1.0};  // T = t_f - t_i
};

struct DwellTimeReport {
    double gamma{};
    double delta{};
    double window{};
    double tau_quadrature{};       // integral of the finite-time weak survival
    double tau_tanh{};             // (1/gamma) tanh(gamma T / 2), exact antiderivative
    double tau_coth_paper{};       // (1/gamma) coth(gamma T / 2) comparison variant
    double relative_discrepancy{}; // |tau_coth_paper - tau_quadrature| / tau_quadrature
    double asymptotic_limit{};     // 1/gamma, the large-T value of both variants
    bool coth_exceeds_window{};    // set exactly when tau_coth_paper >= T
};

// gamma = 0 (omega' = 2 omega): the closed forms degenerate, but the
// integrand limit is well defined and integrates to T/2.
struct DissipationlessCase {
    double window{};
    double limit_value{};  // T/2
};

using DwellOutcome = std::variant<DwellTimeReport, DissipationlessCase>;

inline DwellOutcome dwell_time(const DwellRequest& request) {
    if (!(request.omega > 0.0)) throw DomainError("dwell_time: omega must be positive");
    if (!(request.window > 0.0)) throw DomainError("dwell_time: window must be positive");
    const RetardationScales scales =
        delta_gamma_from_frequencies(request.omega, request.omega_prime);
    if (scales.gamma == 0.0)
        return DissipationlessCase{request.window, 0.5 * request.window};

    PostSelectionSpec spec;
    spec.kind = PostSelectionKind::finite_time;
    spec.gamma = scales.gamma;
    spec.t_i = 0.0;
    spec.t_f = request.window;

    DwellTimeReport report;
    report.gamma = scales.gamma;
    report.delta = scales.delta;
    report.window = request.window;
    report.tau_quadrature = weak_dwell_quadrature(spec);
    const double half = 0.5 * scales.gamma * request.window;
    report.tau_tanh = std::tanh(half) / scales.gamma;
    report.tau_coth_paper = 1.0 / (scales.gamma * std::tanh(half));
    report.relative_discrepancy =
        std::abs(report.tau_coth_paper - report.tau_quadrature) / report.tau_quadrature;
    report.asymptotic_limit = 1.0 / scales.gamma;
    report.coth_exceeds_window = report.tau_coth_paper >= request.window;
    return report;
}

// Spin-flip post-selection omega' = -omega; the coth variant then equals
// (sqrt(2)/3 omega) coth(3 omega T / 2 sqrt(2)).
inline DwellOutcome dwell_spin_flip(double omega, double window) {
    return dwell_time({omega, -omega, window});
}

}  // namespace weakdwell
