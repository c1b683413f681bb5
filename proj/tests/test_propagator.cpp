#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "qes/errors.hpp"
#include "qes/propagator.hpp"
#include "qes/verify.hpp"

using namespace qes;

TEST_CASE("thomas solver inverts random complex tridiagonal systems") {
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    const std::size_t n = 50;
    std::vector<std::complex<double>> lower(n), diag(n), upper(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        lower[i] = {entry(rng), entry(rng)};
        upper[i] = {entry(rng), entry(rng)};
        diag[i] = std::complex<double>{entry(rng), entry(rng)} + 4.0;  // dominant
        x[i] = {entry(rng), entry(rng)};
    }
    lower[0] = upper[n - 1] = 0.0;
    std::vector<std::complex<double>> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = diag[i] * x[i];
        if (i > 0) rhs[i] += lower[i] * x[i - 1];
        if (i + 1 < n) rhs[i] += upper[i] * x[i + 1];
    }
    const auto got = thomas_solve(lower, diag, upper, rhs);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got[i] - x[i]) <= 1e-12);
}

TEST_CASE("free-particle Crank-Nicolson conserves the discrete norm exactly") {
    PropagationConfig cfg;
    cfg.x_min = -20.0;
    cfg.x_max = 20.0;
    cfg.points = 2001;
    cfg.t0 = 0.0;
    cfg.t1 = 1.0;
    cfg.steps = 1000;
    cfg.boundary = BoundaryMode::dirichlet_both;

    WaveField initial;
    initial.grid = cfg.make_grid();
    initial.time = 0.0;
    for (double x : initial.grid)
        initial.values.push_back(std::exp(-0.5 * x * x) *
                                 std::exp(std::complex<double>(0.0, 0.7 * x)));

    const double n0 = discrete_norm(initial);
    const WaveField out =
        propagate_potential(initial, [](double, double) { return 0.0; }, cfg);
    CHECK(std::abs(discrete_norm(out) / n0 - 1.0) <= 1e-12);
}

namespace {

struct Family {
    ModelParams params;
    PumpProfile pump;
    SpectralData spectral;

    Family(ModelParams p, PumpProfile u)
        : params(p), pump(u), spectral(eigensolve(build_h0_matrix(p))) {}

    WaveField eval(const SuperpositionSpec& spec, std::span<const double> grid, double t) const {
        return psi_closed_form(params, pump, spectral, spec, grid, t);
    }
};

}  // namespace

TEST_CASE("stationary mode: propagation reproduces the closed form") {
    Family fam({1, 0.0, 0.0}, PumpProfile::constant(1.0));
    PropagationConfig cfg;
    cfg.x_min = 0.0;
    cfg.x_max = truncation_radius(fam.pump, 1.0);
    cfg.points = 2001;
    cfg.t0 = 0.0;
    cfg.t1 = 1.0;
    cfg.steps = 2000;
    cfg.boundary = BoundaryMode::even_reflect_at_zero;

    const std::vector<double> grid = cfg.make_grid();
    const WaveField initial = fam.eval(SuperpositionSpec::single(0), grid, 0.0);

    // modulus is stationary: every checkpoint stays on the initial ray
    int checked = 0;
    auto observer = [&](int step, const WaveField& f) {
        if (step % 500 != 0) return;
        CHECK(fidelity(f, initial) >= 1.0 - 1e-6);
        ++checked;
    };
    const WaveField out = propagate(initial, fam.params, fam.pump, cfg, observer);
    CHECK(checked == 4);

    const WaveField exact = fam.eval(SuperpositionSpec::single(0), grid, 1.0);
    CHECK(fidelity(out, exact) >= 0.9999);
    CHECK(std::abs(discrete_norm(out) / discrete_norm(initial) - 1.0) <= 1e-10);
}

TEST_CASE("driven superposition tracks the closed form under even-reflect") {
    Family fam({2, 0.0, 0.5}, PumpProfile::sinusoidal(1.0, 0.3, 2.0));
    PropagationConfig cfg;
    cfg.x_min = 0.0;
    cfg.x_max = truncation_radius(fam.pump, 1.0);
    cfg.points = 2001;
    cfg.t0 = 0.0;
    cfg.t1 = 0.5;
    cfg.steps = 2000;
    cfg.boundary = BoundaryMode::even_reflect_at_zero;

    const std::vector<double> grid = cfg.make_grid();
    const SuperpositionSpec spec = SuperpositionSpec::equal_weights(3);
    const WaveField initial = fam.eval(spec, grid, 0.0);
    const WaveField out = propagate(initial, fam.params, fam.pump, cfg);
    const WaveField exact = fam.eval(spec, grid, 0.5);
    CHECK(fidelity(out, exact) >= 0.999);
    CHECK(std::abs(discrete_norm(out) / discrete_norm(initial) - 1.0) <= 1e-10);
}

TEST_CASE("half-line Dirichlet propagation for k > 0") {
    Family fam({1, 2.0, 0.3}, PumpProfile::constant(1.0));
    PropagationConfig cfg;
    cfg.points = 2001;
    cfg.x_max = truncation_radius(fam.pump, 1.0);
    cfg.x_min = cfg.x_max / cfg.points;
    cfg.t0 = 0.0;
    cfg.t1 = 0.5;
    cfg.steps = 1000;
    cfg.boundary = BoundaryMode::dirichlet_both;

    const std::vector<double> grid = cfg.make_grid();
    const WaveField initial = fam.eval(SuperpositionSpec::single(0), grid, 0.0);
    const WaveField out = propagate(initial, fam.params, fam.pump, cfg);
    const WaveField exact = fam.eval(SuperpositionSpec::single(0), grid, 0.5);
    CHECK(fidelity(out, exact) >= 0.9999);
}

TEST_CASE("fidelity properties") {
    Family fam({2, 0.0, 0.0}, PumpProfile::constant(1.0));
    const std::vector<double> grid = uniform_grid(0.0, 5.6, 1001);
    const WaveField m0 = fam.eval(SuperpositionSpec::single(0), grid, 0.0);
    const WaveField m1 = fam.eval(SuperpositionSpec::single(1), grid, 0.0);

    CHECK(fidelity(m0, m0) == doctest::Approx(1.0).epsilon(1e-12));

    WaveField rotated = m0;
    for (auto& v : rotated.values) v *= std::complex<double>(0.0, 1.0);
    CHECK(fidelity(m0, rotated) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(fidelity(m0, m1) <= 1e-8);

    WaveField zero = m0;
    for (auto& v : zero.values) v = 0.0;
    CHECK_THROWS_AS(fidelity(m0, zero), std::domain_error);
}

TEST_CASE("FD eigensolver self-test: harmonic oscillator on the whole line") {
    // H = -d^2/dx^2 + x^2 has spectrum 1, 3, 5, ...
    const auto eigs = stationary_eigs_fd_potential([](double x) { return x * x; }, -10.0, 10.0,
                                                   4001, BoundaryMode::dirichlet_both, 3);
    CHECK(std::abs(eigs[0] - 1.0) <= 1e-3);
    CHECK(std::abs(eigs[1] - 3.0) <= 1e-3);
    CHECK(std::abs(eigs[2] - 5.0) <= 1e-3);
}

TEST_CASE("constant-u energy identity E = 4 u lambda") {
    SUBCASE("n = 1: V = x^6 - 7x^2 has even levels +-2 sqrt(2)") {
        const double r = 2.0 * std::sqrt(2.0);
        const auto eigs =
            stationary_eigs_fd({1, 0.0, 0.0}, 1.0,
                               truncation_radius(PumpProfile::constant(1.0), 1.0), 4001, 2);
        CHECK(std::abs(eigs[0] + r) <= 1e-3);
        CHECK(std::abs(eigs[1] - r) <= 1e-3);
    }
    SUBCASE("n = 2: V = x^6 - 11x^2 has even levels {-8, 0, 8}") {
        const auto eigs =
            stationary_eigs_fd({2, 0.0, 0.0}, 1.0,
                               truncation_radius(PumpProfile::constant(1.0), 1.0), 4001, 3);
        CHECK(std::abs(eigs[0] + 8.0) <= 2e-3);
        CHECK(std::abs(eigs[1]) <= 2e-3);
        CHECK(std::abs(eigs[2] - 8.0) <= 2e-3);
    }
    SUBCASE("FD error shrinks at second order") {
        const double x_max = truncation_radius(PumpProfile::constant(1.0), 1.0);
        const double target = -2.0 * std::sqrt(2.0);
        const double e1 =
            std::abs(stationary_eigs_fd({1, 0.0, 0.0}, 1.0, x_max, 1001, 1)[0] - target);
        const double e2 =
            std::abs(stationary_eigs_fd({1, 0.0, 0.0}, 1.0, x_max, 2001, 1)[0] - target);
        CHECK(e1 / e2 >= 2.5);  // nominal factor 4
    }
    SUBCASE("fractional k on the half-line") {
        const ModelParams params{2, 1.5, 0.7};
        const SpectralData s = eigensolve(build_h0_matrix(params));
        const auto eigs = stationary_eigs_fd(params, 1.0, 6.0, 4001, 3);
        for (int j = 0; j < 3; ++j) {
            double best = 1e9;
            for (double e : eigs) best = std::min(best, std::abs(e - 4.0 * s.eigenvalues[j]));
            CHECK(best <= 5e-3);
        }
    }
}

TEST_CASE("scaled drive scales the energies: u = 2 doubles 4 u lambda") {
    const ModelParams params{1, 0.0, 0.0};
    const SpectralData s = eigensolve(build_h0_matrix(params));
    const double u = 2.0;
    const double x_max = truncation_radius(PumpProfile::constant(u), 1.0) + 1.0;
    const auto eigs = stationary_eigs_fd(params, u, x_max, 4001, 2);
    CHECK(std::abs(eigs[0] - 4.0 * u * s.eigenvalues[0]) <= 5e-3);
    CHECK(std::abs(eigs[1] - 4.0 * u * s.eigenvalues[1]) <= 5e-3);
}

TEST_CASE("configuration guards") {
    PropagationConfig cfg;
    cfg.x_min = 0.0;
    cfg.x_max = 5.0;
    cfg.points = 100;  // too few
    cfg.t0 = 0.0;
    cfg.t1 = 1.0;
    cfg.steps = 1000;
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg.points = 301;
    cfg.steps = 10;  // too few
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg.steps = 200;
    CHECK_NOTHROW(cfg.validate());

    // even-reflect demands k = 0
    Family fam({1, 1.5, 0.0}, PumpProfile::constant(1.0));
    cfg.boundary = BoundaryMode::even_reflect_at_zero;
    const std::vector<double> grid = cfg.make_grid();
    WaveField initial;
    initial.grid = grid;
    initial.values.assign(grid.size(), {1.0, 0.0});
    CHECK_THROWS_AS(propagate(initial, fam.params, fam.pump, cfg), config_error);

    CHECK_THROWS_AS(stationary_eigs_fd_potential([](double) { return 0.0; }, 0.0, 1.0, 9001,
                                                 BoundaryMode::dirichlet_both, 1),
                    config_error);
}
