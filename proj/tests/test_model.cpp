#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "qes/model.hpp"

using namespace qes;

TEST_CASE("potential: direct substitution checks") {
    SUBCASE("n = 1, k = 0, beta = 0, u = 1: V = x^6 - 7x^2") {
        const ModelParams params{1, 0.0, 0.0};
        const PumpProfile pump = PumpProfile::constant(1.0);
        CHECK(potential(params, pump, 1.0, 0.3) == doctest::Approx(-6.0).epsilon(1e-14));
        CHECK(potential(params, pump, 2.0, 0.0) == doctest::Approx(64.0 - 28.0).epsilon(1e-14));
    }
    SUBCASE("k = 2: centrifugal term contributes k(k-1)/x^2") {
        const ModelParams params{1, 2.0, 0.5};
        const PumpProfile pump = PumpProfile::constant(1.3);
        const double x = 0.5;
        const PotentialCoeffs c = potential_coeffs(params, pump, 0.2);
        CHECK(c.c_inv == 2.0);
        const double poly = c.c6 * std::pow(x, 6) + c.c4 * std::pow(x, 4) + c.c2 * x * x;
        CHECK(potential(params, pump, x, 0.2) == doctest::Approx(poly + 8.0).epsilon(1e-13));
    }
    SUBCASE("x = 0 is singular iff k(k-1) != 0") {
        const PumpProfile pump = PumpProfile::constant(1.0);
        CHECK_THROWS_AS(potential({1, 2.0, 0.0}, pump, 0.0, 0.0), std::domain_error);
        CHECK_NOTHROW(potential({1, 1.0, 0.0}, pump, 0.0, 0.0));  // k(k-1) = 0
        CHECK_NOTHROW(potential({1, 0.0, 0.0}, pump, 0.0, 0.0));
    }
}

TEST_CASE("constant drive reduces to the static sextic family") {
    // with nu = u^2, mu = beta u and k = 0:
    // V = nu^2 x^6 + 2 mu nu x^4 + (mu^2 - (4n+3) nu) x^2
    std::mt19937 rng(2025);
    std::uniform_real_distribution<double> pick_x(-3.0, 3.0);
    std::uniform_real_distribution<double> pick_u(0.3, 2.0);
    std::uniform_real_distribution<double> pick_beta(-2.0, 2.0);
    std::uniform_int_distribution<int> pick_n(0, 6);
    for (int i = 0; i < 100; ++i) {
        const int n = pick_n(rng);
        const double u = pick_u(rng);
        const double beta = pick_beta(rng);
        const double x = pick_x(rng);
        const double nu = u * u;
        const double mu = beta * u;
        const double expected = nu * nu * std::pow(x, 6) + 2.0 * mu * nu * std::pow(x, 4) +
                                (mu * mu - (4.0 * n + 3.0) * nu) * x * x;
        const double got = potential({n, 0.0, beta}, PumpProfile::constant(u), x, 1.7);
        CHECK(std::abs(got - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("sigma and the modulus prefactor") {
    SUBCASE("frozen value at k = 0, beta = 0, u = 1, x = 1") {
        CHECK(sigma({1, 0.0, 0.0}, PumpProfile::constant(1.0), 1.0, 0.0) == -0.25);
    }
    SUBCASE("exp(sigma) equals mod_prefactor") {
        const ModelParams params{2, 1.5, 0.7};
        const PumpProfile pump = PumpProfile::sinusoidal(1.0, 0.3, 2.0);
        std::mt19937 rng(77);
        std::uniform_real_distribution<double> pick_x(0.1, 3.0);
        std::uniform_real_distribution<double> pick_t(0.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            const double x = pick_x(rng);
            const double t = pick_t(rng);
            const double via_log = std::exp(sigma(params, pump, x, t));
            const double direct = mod_prefactor(params, pump, x, t);
            CHECK(std::abs(via_log - direct) <= 1e-13 * direct);
        }
    }
    SUBCASE("k = 1 prefactor vanishes linearly at the origin") {
        const ModelParams params{0, 1.0, 0.0};
        const PumpProfile pump = PumpProfile::constant(1.0);
        for (double x : {1e-4, 1e-6, 1e-8})
            CHECK(mod_prefactor(params, pump, x, 0.0) / x == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("domain errors off the half-line when k > 0") {
        const PumpProfile pump = PumpProfile::constant(1.0);
        CHECK_THROWS_AS(sigma({1, 1.5, 0.0}, pump, -1.0, 0.0), std::domain_error);
        CHECK_THROWS_AS(mod_prefactor({1, 1.5, 0.0}, pump, 0.0, 0.0), std::domain_error);
        CHECK_NOTHROW(sigma({1, 0.0, 0.0}, pump, -1.0, 0.0));  // whole line for k = 0
        CHECK_NOTHROW(mod_prefactor({1, 0.0, 0.0}, pump, -1.0, 0.0));
    }
}

namespace {

struct ClosedFormFixture {
    ModelParams params;
    PumpProfile pump;
    SpectralData spectral;

    ClosedFormFixture(ModelParams p, PumpProfile u)
        : params(p), pump(u), spectral(eigensolve(build_h0_matrix(p))) {}

    WaveField eval(const SuperpositionSpec& spec, std::span<const double> grid, double t) const {
        return psi_closed_form(params, pump, spectral, spec, grid, t);
    }
};

}  // namespace

TEST_CASE("closed form at t = 0 with u(0) = 1 is the gauged polynomial") {
    ClosedFormFixture fix({2, 0.0, 0.5}, PumpProfile::constant(1.0));
    const std::vector<double> grid = uniform_grid(-3.0, 3.0, 301);
    const WaveField field = fix.eval(SuperpositionSpec::single(1), grid, 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const double expected = std::exp(-0.25 * x * x * x * x - 0.25 * x * x) *
                                fix.spectral.eigenvectors[1](x);
        CHECK(std::abs(field.values[i].real() - expected) <= 1e-13);
        CHECK(std::abs(field.values[i].imag()) <= 1e-15);
    }
}

TEST_CASE("constant drive: pure eigenphase rotation exp(-4 i lambda u t)") {
    ClosedFormFixture fix({1, 0.0, 0.0}, PumpProfile::constant(1.4));
    const std::vector<double> grid = uniform_grid(0.0, 4.0, 201);
    const WaveField at0 = fix.eval(SuperpositionSpec::single(0), grid, 0.0);
    const double t = 0.63;
    const WaveField att = fix.eval(SuperpositionSpec::single(0), grid, t);
    const double lambda = fix.spectral.eigenvalues[0];
    const std::complex<double> phase =
        std::exp(std::complex<double>(0.0, -4.0 * lambda * 1.4 * t));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::complex<double> expected = phase * at0.values[i];
        CHECK(std::abs(att.values[i] - expected) <=
              1e-12 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("modulus scaling law |psi(x,t)| = u^(1/4) g(sqrt(u) x)") {
    ClosedFormFixture fix({2, 1.5, 0.7}, PumpProfile::sinusoidal(1.0, 0.3, 2.0));
    auto g = [&](double y) {
        return std::pow(y, 1.5) * std::exp(-0.25 * y * y * y * y - 0.35 * y * y) *
               std::abs(fix.spectral.eigenvectors[0](y));
    };
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> pick_x(0.05, 2.5);
    std::uniform_real_distribution<double> pick_t(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double x = pick_x(rng);
        const double t = pick_t(rng);
        const double u = eval_pump(fix.pump, t).u;
        const std::vector<double> grid{x, x + 1.0};
        const WaveField field = fix.eval(SuperpositionSpec::single(0), grid, t);
        const double expected = std::pow(u, 0.25) * g(std::sqrt(u) * x);
        CHECK(std::abs(std::abs(field.values[0]) - expected) <=
              1e-12 * std::max(1e-30, expected));
    }
}

TEST_CASE("superposition validation") {
    ClosedFormFixture fix({2, 0.0, 0.0}, PumpProfile::constant(1.0));
    const std::vector<double> grid = uniform_grid(0.0, 1.0, 11);
    SuperpositionSpec dup{{{0, {1, 0}}, {0, {1, 0}}}};
    CHECK_THROWS_AS(fix.eval(dup, grid, 0.0), std::domain_error);
    SuperpositionSpec out_of_range{{{3, {1, 0}}}};
    CHECK_THROWS_AS(fix.eval(out_of_range, grid, 0.0), std::domain_error);
    SuperpositionSpec empty{};
    CHECK_THROWS_AS(fix.eval(empty, grid, 0.0), std::domain_error);
}

TEST_CASE("truncation radius") {
    CHECK(truncation_radius(PumpProfile::constant(1.0), 1.0) ==
          doctest::Approx(std::pow(160.0, 0.25) + 2.0).epsilon(1e-14));
    // sinusoidal: minimum a - |b| enters as u_min
    const double umin = 0.7;
    CHECK(truncation_radius(PumpProfile::sinusoidal(1.0, 0.3, 2.0), 1.0) ==
          doctest::Approx(std::pow(160.0 / (umin * umin), 0.25) + 2.0).epsilon(1e-12));
}

TEST_CASE("wavefield validation") {
    WaveField f;
    f.grid = {0.0, 1.0};
    f.values = {{1.0, 0.0}};
    CHECK_THROWS_AS(f.validate(), std::invalid_argument);
    f.values.push_back({std::nan(""), 0.0});
    CHECK_THROWS_AS(f.validate(), std::invalid_argument);
    f.values[1] = {0.5, 0.0};
    CHECK_NOTHROW(f.validate());
}

TEST_CASE("potential mutations move the right coefficient") {
    const ModelParams params{2, 1.5, 0.7};
    const PumpProfile pump = PumpProfile::sinusoidal(1.0, 0.3, 2.0);
    const double t = 0.4;
    const PotentialCoeffs base = potential_coeffs(params, pump, t);
    for (const std::string& name : potential_mutation_names()) {
        const PotentialCoeffs mut =
            potential_coeffs(params, pump, t, potential_mutation_from_name(name));
        const bool changed = mut.c6 != base.c6 || mut.c4 != base.c4 || mut.c2 != base.c2 ||
                             mut.c_inv != base.c_inv;
        CHECK(changed);
    }
    CHECK(potential_mutation_from_name("none") == PotentialMutation::none);
    CHECK_THROWS_AS(potential_mutation_from_name("bogus"), std::invalid_argument);
}
