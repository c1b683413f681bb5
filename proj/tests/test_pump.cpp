#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qes/pump.hpp"
#include "qes/quadrature.hpp"

using namespace qes;

TEST_CASE("constant pump: sample is (u0, 0, 0, u0 t)") {
    const PumpProfile p = PumpProfile::constant(2.0);
    const PumpSample s = eval_pump(p, 3.0);
    CHECK(s.u == 2.0);
    CHECK(s.du == 0.0);
    CHECK(s.ddu == 0.0);
    CHECK(s.integral == 6.0);
}

TEST_CASE("exponential pump at t = 0") {
    const PumpProfile p = PumpProfile::exponential(1.0, 1.0);
    const PumpSample s = eval_pump(p, 0.0);
    CHECK(s.u == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.du == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(s.ddu == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.integral == 0.0);
}

TEST_CASE("analytic derivatives match central differences") {
    const double delta = 1e-3;
    const std::vector<PumpProfile> profiles = {
        PumpProfile::sinusoidal(1.0, 0.3, 2.0),
        PumpProfile::exponential(1.3, 0.8),
        PumpProfile::rational(2.0, 0.5),
    };
    for (const PumpProfile& p : profiles) {
        auto u_of = [&](double tt) { return p.sample(tt).u; };
        for (double t : {0.7, 0.11, 1.9}) {
            const PumpSample s = eval_pump(p, t);
            CHECK(std::abs(s.du - qes_test::fd_first(u_of, t, delta)) <= 1e-8);
            CHECK(std::abs(s.ddu - qes_test::fd_second(u_of, t, delta)) <= 1e-8);
        }
    }
}

TEST_CASE("h(t) is exactly n for constant drives") {
    const PumpProfile p = PumpProfile::constant(0.37);
    for (double t : {0.0, 0.5, 2.0, 17.0}) CHECK(h_of_t(p, t, 3) == 3.0);
}

TEST_CASE("h(t) for the exponential drive at t = 0") {
    // u' = -alpha u, u'' = alpha^2 u: (3 alpha^2 - 2 alpha^2)/64 = alpha^2/64
    const PumpProfile p = PumpProfile::exponential(1.0, 2.0);
    CHECK(h_of_t(p, 0.0, 0) == doctest::Approx(0.0625).epsilon(1e-15));
}

TEST_CASE("h(t) agrees with a finite-difference rebuild of the numerator") {
    const PumpProfile p = PumpProfile::sinusoidal(1.0, 0.3, 2.0);
    auto u_of = [&](double tt) { return p.sample(tt).u; };
    for (double t : {0.3, 0.8, 1.4}) {
        const double u = u_of(t);
        const double du = qes_test::fd_first(u_of, t, 1e-3);
        const double ddu = qes_test::fd_second(u_of, t, 1e-3);
        const double expected = (3.0 * du * du - 2.0 * u * ddu) / (64.0 * std::pow(u, 4)) + 2.0;
        CHECK(std::abs(h_of_t(p, t, 2) - expected) <= 1e-6);
    }
}

TEST_CASE("closed-form integrals agree with adaptive quadrature") {
    const double horizon = 2.0;
    const std::vector<PumpProfile> profiles = {
        PumpProfile::constant(2.0),
        PumpProfile::exponential(1.0, 1.7),
        PumpProfile::sinusoidal(1.0, 0.3, 2.0),
        PumpProfile::rational(1.5, 0.8),
    };
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> pick(0.0, horizon);
    for (const PumpProfile& p : profiles) {
        auto u_of = [&](double tt) { return p.sample(tt).u; };
        for (int i = 0; i < 100; ++i) {
            const double t = pick(rng);
            const double closed = eval_pump(p, t).integral;
            const double quad = adaptive_simpson(u_of, 0.0, t, 1e-13);
            CHECK(std::abs(closed - quad) <= 1e-10 * (1.0 + std::abs(closed)));
        }
    }
}

TEST_CASE("integral is nondecreasing") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> pick(0.0, 3.0);
    const std::vector<PumpProfile> profiles = {
        PumpProfile::exponential(0.9, 2.5),
        PumpProfile::sinusoidal(2.0, 1.5, 5.0),
        PumpProfile::rational(1.0, 1.0),
    };
    for (const PumpProfile& p : profiles) {
        for (int i = 0; i < 50; ++i) {
            double t1 = pick(rng);
            double t2 = pick(rng);
            if (t1 > t2) std::swap(t1, t2);
            CHECK(eval_pump(p, t1).integral <= eval_pump(p, t2).integral);
        }
    }
}

TEST_CASE("positivity validation by analytic minimum") {
    CHECK_THROWS_AS(PumpProfile::sinusoidal(1.0, 2.0, 1.0).validate_on(1.0), std::domain_error);
    CHECK_THROWS_AS(PumpProfile::constant(-1.0).validate_on(1.0), std::domain_error);
    CHECK_THROWS_AS(PumpProfile::rational(1.0, -1.0).validate_on(2.0), std::domain_error);
    CHECK_NOTHROW(PumpProfile::rational(1.0, -0.4).validate_on(2.0));  // pole past horizon
    CHECK_NOTHROW(PumpProfile::sinusoidal(1.0, 0.999, 3.0).validate_on(10.0));
}

TEST_CASE("non-positive sample names the offending time") {
    const PumpProfile p = PumpProfile::constant(-2.0);
    try {
        eval_pump(p, 1.25);
        FAIL("expected domain_error");
    } catch (const std::domain_error& err) {
        CHECK(std::string(err.what()).find("1.25") != std::string::npos);
    }
    CHECK_THROWS_AS(eval_pump(PumpProfile::constant(1.0), -0.1), std::domain_error);
}

TEST_CASE("gauge factor is 4u") {
    const PumpProfile p = PumpProfile::sinusoidal(1.0, 0.3, 2.0);
    const double t = 0.4;
    CHECK(gauge_factor(p, t) == doctest::Approx(4.0 * eval_pump(p, t).u).epsilon(1e-15));
}
