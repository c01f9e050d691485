#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <variant>

#include "test_support.hpp"
#include "weakdwell/dwell.hpp"

using namespace weakdwell;

namespace {

DwellTimeReport report_for(double omega, double omega_prime, double T) {
    return std::get<DwellTimeReport>(dwell_time({omega, omega_prime, T}));
}

// independent hyperbolic route
double coth_oracle(double gamma, double T) {
    const double x = 0.5 * gamma * T;
    return std::cosh(x) / (gamma * std::sinh(x));
}

}  // namespace

TEST_CASE("spin-flip dwell time saturates at sqrt(2)/(3 omega)") {
    const auto outcome = dwell_spin_flip(1.0, 50.0);
    const auto& report = std::get<DwellTimeReport>(outcome);
    const double limit = std::sqrt(2.0) / 3.0;
    CHECK(std::abs(report.tau_quadrature - limit) < 1e-8);
    CHECK(std::abs(report.tau_tanh - limit) < 1e-8);
    CHECK(std::abs(report.tau_coth_paper - limit) < 1e-8);
    CHECK(std::abs(report.asymptotic_limit - limit) < 1e-12);
    CHECK(std::abs(limit - 0.471405) < 1e-6);
    CHECK(std::abs(report.gamma - 3.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("spin-flip dwell time scales as 1/omega") {
    const auto one = std::get<DwellTimeReport>(dwell_spin_flip(1.0, 50.0));
    const auto two = std::get<DwellTimeReport>(dwell_spin_flip(2.0, 50.0));
    CHECK(std::abs(two.tau_quadrature - 0.5 * one.tau_quadrature) < 1e-8);
    CHECK(std::abs(two.tau_quadrature - 0.23570) < 1e-5);
}

TEST_CASE("spin-flip report at unit window shows the tanh/coth split") {
    const DwellTimeReport report = report_for(1.0, -1.0, 1.0);
    const double gamma = 3.0 / std::sqrt(2.0);
    CHECK(std::abs(report.tau_tanh - std::tanh(0.5 * gamma) / gamma) < 1e-12);
    CHECK(std::abs(report.tau_quadrature - report.tau_tanh) < 1e-9);
    CHECK(std::abs(report.tau_coth_paper - coth_oracle(gamma, 1.0)) < 1e-12);
    CHECK(std::abs(report.tau_tanh - 0.37048) < 1e-4);
    CHECK(std::abs(report.tau_coth_paper - 0.59982) < 1e-4);
    CHECK(report.relative_discrepancy > 0.6);
    CHECK(std::abs(report.relative_discrepancy -
                   std::abs(report.tau_coth_paper - report.tau_quadrature) /
                       report.tau_quadrature) < 1e-12);
}

TEST_CASE("short windows expose the unphysical coth branch") {
    const auto outcome = dwell_spin_flip(1.0, 0.01);
    const auto& report = std::get<DwellTimeReport>(outcome);
    CHECK(std::abs(report.tau_quadrature - 0.005) < 1e-5);  // ~T/2
    CHECK(report.tau_coth_paper > report.window);           // far beyond the window
    CHECK(report.coth_exceeds_window);
    CHECK(std::abs(report.tau_coth_paper - coth_oracle(report.gamma, 0.01)) < 1e-9);
    // small-argument forms: tanh(x) ~ x, coth(x) ~ 1/x + x/3
    CHECK(std::abs(report.tau_coth_paper - 2.0 / (report.gamma * report.gamma * 0.01)) /
              report.tau_coth_paper < 1e-4);
}

TEST_CASE("coth flag is set exactly when the coth variant spills over the window") {
    for (double T : {0.05, 0.2, 0.5, 0.9, 1.1, 2.0, 5.0, 20.0}) {
        const DwellTimeReport report = report_for(1.0, -1.0, T);
        CHECK(report.coth_exceeds_window == (report.tau_coth_paper >= T));
        CHECK(report.tau_quadrature < T);  // physicality of the integral route
    }
}

TEST_CASE("quadrature equals the tanh closed form across gamma T decades") {
    for (double gt : {0.01, 0.05, 0.2, 1.0, 3.0, 10.0, 50.0}) {
        const double omega = 0.8;
        const double gamma = delta_gamma_from_frequencies(omega, -omega).gamma;
        const DwellTimeReport report = report_for(omega, -omega, gt / gamma);
        CHECK(std::abs(report.tau_quadrature - report.tau_tanh) < 1e-9);
    }
}

TEST_CASE("both closed forms converge to 1/gamma exponentially in gamma T") {
    // |tau - 1/gamma| = (2/gamma) e^{-gamma T} / (1 -+ e^{-gamma T}); the coth
    // branch sits a factor 1/(1 - e^{-gamma T}) above the plain envelope, and
    // past gamma T ~ 20 the residuals are ulp-limited
    for (double gt : {6.0, 10.0, 20.0, 30.0}) {
        const double gamma = delta_gamma_from_frequencies(1.0, -1.0).gamma;
        const DwellTimeReport report = report_for(1.0, -1.0, gt / gamma);
        const double bound = 2.0 * std::exp(-gt) / gamma;
        CHECK(std::abs(report.tau_tanh - 1.0 / gamma) < bound + 1e-15);
        CHECK(std::abs(report.tau_coth_paper - 1.0 / gamma) < 1.05 * bound + 1e-15);
        CHECK(std::abs(report.tau_quadrature - 1.0 / gamma) < bound + 2e-10);
    }
}

TEST_CASE("dwell reports respect dimensional scaling") {
    const DwellTimeReport base = report_for(1.0, -1.0, 2.0);
    for (double k : {0.5, 2.0, 7.0}) {
        const DwellTimeReport scaled = report_for(k, -k, 2.0 / k);
        CHECK(std::abs(scaled.gamma - k * base.gamma) < 1e-12 * k);
        CHECK(std::abs(scaled.tau_quadrature - base.tau_quadrature / k) < 1e-10);
        CHECK(std::abs(scaled.tau_tanh - base.tau_tanh / k) < 1e-12);
        CHECK(std::abs(scaled.tau_coth_paper - base.tau_coth_paper / k) < 1e-12);
    }
}

TEST_CASE("dissipationless request reports the T/2 limit") {
    const DwellOutcome outcome = dwell_time({1.0, 2.0, 3.0});
    REQUIRE(std::holds_alternative<DissipationlessCase>(outcome));
    const auto& c = std::get<DissipationlessCase>(outcome);
    CHECK(c.window == 3.0);
    CHECK(c.limit_value == 1.5);
}

TEST_CASE("dwell requests outside the domain are rejected") {
    CHECK_THROWS_AS(dwell_time({1.0, 2.5, 1.0}), DomainError);
    CHECK_THROWS_AS(dwell_time({-1.0, -2.0, 1.0}), DomainError);
    CHECK_THROWS_AS(dwell_time({1.0, -1.0, 0.0}), DomainError);
}

TEST_CASE("report fields are finite and internally consistent") {
    const DwellTimeReport report = report_for(1.3, 0.4, 4.0);
    for (double v : {report.gamma, report.delta, report.tau_quadrature, report.tau_tanh,
                     report.tau_coth_paper, report.relative_discrepancy,
                     report.asymptotic_limit}) {
        CHECK(std::isfinite(v));
    }
    CHECK(report.tau_quadrature > 0.0);
    CHECK(report.tau_quadrature < report.window);
    const RetardationScales scales = delta_gamma_from_frequencies(1.3, 0.4);
    CHECK(report.gamma == scales.gamma);
    CHECK(report.delta == scales.delta);
}
