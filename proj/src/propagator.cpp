#include "qes/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qes/errors.hpp"
#include "qes/verify.hpp"

namespace qes {

std::string to_string(BoundaryMode mode) {
    return mode == BoundaryMode::dirichlet_both ? "dirichlet-both" : "even-reflect-at-0";
}

void PropagationConfig::validate() const {
    if (points < 201) throw config_error("propagate.points: must be >= 201");
    if (steps < 100) throw config_error("propagate.steps: must be >= 100");
    if (!(t1 > t0)) throw config_error("propagate.t1: must exceed t0");
    if (!(x_max > x_min)) throw config_error("propagate grid: x_max must exceed x_min");
    if (boundary == BoundaryMode::even_reflect_at_zero && x_min != 0.0)
        throw config_error("propagate grid: even-reflect grids must start at x = 0");
}

std::vector<double> PropagationConfig::make_grid() const {
    return uniform_grid(x_min, x_max, points);
}

std::vector<std::complex<double>> thomas_solve(std::span<const std::complex<double>> lower,
                                               std::span<const std::complex<double>> diag,
                                               std::span<const std::complex<double>> upper,
                                               std::vector<std::complex<double>> rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n)
        throw std::invalid_argument("thomas_solve: band size mismatch");
    if (n == 0) return rhs;

    std::vector<std::complex<double>> scratch(n);
    if (std::abs(diag[0]) == 0.0) throw numeric_error("thomas_solve: zero pivot at row 0");
    scratch[0] = upper[0] / diag[0];
    rhs[0] /= diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const std::complex<double> pivot = diag[i] - lower[i] * scratch[i - 1];
        if (std::abs(pivot) == 0.0) {
            std::ostringstream os;
            os << "thomas_solve: zero pivot at row " << i;
            throw numeric_error(os.str());
        }
        scratch[i] = upper[i] / pivot;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
    return rhs;
}

namespace {

// Row coefficients of H = -Laplacian + V on the propagation grid. Pinned
// rows are encoded as all-zero H rows (identity rows of the Cayley factors).
struct HamiltonianRows {
    std::vector<double> lower, diag, upper;  // all size n; pinned rows zeroed
    std::vector<bool> pinned;
};

HamiltonianRows hamiltonian_rows(std::span<const double> grid, BoundaryMode boundary,
                                 const std::function<double(double, double)>& V, double t) {
    const std::size_t n = grid.size();
    const double dx = grid[1] - grid[0];
    const double inv = 1.0 / (dx * dx);
    HamiltonianRows h;
    h.lower.assign(n, 0.0);
    h.diag.assign(n, 0.0);
    h.upper.assign(n, 0.0);
    h.pinned.assign(n, false);

    for (std::size_t i = 1; i + 1 < n; ++i) {
        h.lower[i] = -inv;
        h.diag[i] = 2.0 * inv + V(grid[i], t);
        h.upper[i] = -inv;
    }
    if (boundary == BoundaryMode::even_reflect_at_zero) {
        h.diag[0] = 2.0 * inv + V(grid[0], t);
        h.upper[0] = -2.0 * inv;  // ghost psi(-dx) = psi(dx)
    } else {
        h.pinned[0] = true;
    }
    h.pinned[n - 1] = true;
    return h;
}

}  // namespace

WaveField propagate_potential(const WaveField& initial,
                              const std::function<double(double, double)>& V,
                              const PropagationConfig& cfg, const StepObserver& observer) {
    cfg.validate();
    initial.validate();
    if (static_cast<int>(initial.grid.size()) != cfg.points)
        throw config_error("propagate: initial field does not live on the configured grid");

    const std::size_t n = initial.grid.size();
    const double dt = (cfg.t1 - cfg.t0) / cfg.steps;

    WaveField field = initial;
    field.time = cfg.t0;
    // Dirichlet rows hold zero; anything else feeds or drains probability
    // through the wall and breaks the exact unitarity of the Cayley scheme
    if (cfg.boundary == BoundaryMode::dirichlet_both) field.values.front() = 0.0;
    field.values.back() = 0.0;

    std::vector<std::complex<double>> a_lower(n), a_diag(n), a_upper(n), rhs(n);
    const std::complex<double> half_idt{0.0, 0.5 * dt};

    for (int step = 0; step < cfg.steps; ++step) {
        const double t_mid = cfg.t0 + (step + 0.5) * dt;
        const HamiltonianRows h = hamiltonian_rows(field.grid, cfg.boundary, V, t_mid);

        // rhs = (I - i dt/2 H) psi ; pinned rows stay put
        for (std::size_t i = 0; i < n; ++i) {
            if (h.pinned[i]) {
                a_lower[i] = 0.0;
                a_diag[i] = 1.0;
                a_upper[i] = 0.0;
                rhs[i] = field.values[i];
                continue;
            }
            std::complex<double> hv = h.diag[i] * field.values[i];
            if (i > 0) hv += h.lower[i] * field.values[i - 1];
            if (i + 1 < n) hv += h.upper[i] * field.values[i + 1];
            rhs[i] = field.values[i] - half_idt * hv;
            a_lower[i] = half_idt * h.lower[i];
            a_diag[i] = 1.0 + half_idt * h.diag[i];
            a_upper[i] = half_idt * h.upper[i];
        }
        field.values = thomas_solve(a_lower, a_diag, a_upper, std::move(rhs));
        rhs.assign(n, {});
        field.time = cfg.t0 + (step + 1) * dt;
        if (observer) observer(step + 1, field);
    }
    return field;
}

WaveField propagate(const WaveField& initial, const ModelParams& params,
                    const PumpProfile& profile, const PropagationConfig& cfg,
                    const StepObserver& observer) {
    params.validate();
    if (cfg.boundary == BoundaryMode::even_reflect_at_zero && params.k != 0.0)
        throw config_error("propagate.boundary: even-reflect is only valid for k = 0");
    profile.validate_on(std::max(cfg.t0, cfg.t1));
    const double needed = truncation_radius(profile, std::max(cfg.t0, cfg.t1));
    if (cfg.x_max < needed) {
        std::ostringstream os;
        os << "propagate grid: x_max = " << cfg.x_max << " is below the truncation radius "
           << needed;
        throw config_error(os.str());
    }
    // the row builder evaluates V at one midpoint time per step: cache the
    // pump-dependent coefficients instead of resampling u(t) per grid point
    auto V = [&params, &profile, cached_t = std::numeric_limits<double>::quiet_NaN(),
              cached = PotentialCoeffs{}](double x, double t) mutable {
        if (t != cached_t) {
            cached = potential_coeffs(params, profile, t);
            cached_t = t;
        }
        return cached.eval(x);
    };
    return propagate_potential(initial, V, cfg, observer);
}

double discrete_norm(const WaveField& field) {
    const std::size_t n = field.grid.size();
    if (n < 2) throw config_error("discrete_norm: grid too small");
    const double dx = (field.grid.back() - field.grid.front()) / static_cast<double>(n - 1);
    double acc = 0.5 * (std::norm(field.values.front()) + std::norm(field.values.back()));
    for (std::size_t i = 1; i + 1 < n; ++i) acc += std::norm(field.values[i]);
    return acc * dx;
}

double fidelity(const WaveField& a, const WaveField& b) {
    const double na = norm(a);
    const double nb = norm(b);
    if (!(na > 0.0) || !(nb > 0.0)) throw std::domain_error("fidelity: zero-norm input");
    const std::complex<double> overlap = inner(a, b);
    return std::norm(overlap) / (na * nb);
}

std::vector<double> stationary_eigs_fd_potential(const std::function<double(double)>& V,
                                                 double x_min, double x_max, int points,
                                                 BoundaryMode boundary, int count) {
    if (points < 3) throw config_error("stationary_eigs_fd: need at least 3 points");
    if (points > 8001)
        throw config_error("stationary_eigs_fd: points capped at 8001 for desk-scale runs");
    if (count < 1 || count > points)
        throw config_error("stationary_eigs_fd: invalid eigenvalue count");

    const std::vector<double> grid = uniform_grid(x_min, x_max, points);
    const double dx = grid[1] - grid[0];
    const double inv = 1.0 / (dx * dx);
    const std::size_t n = grid.size();

    // Dirichlet walls sit one spacing outside both ends (psi = 0 there);
    // the even-reflect closure doubles the first off-diagonal coupling.
    TridiagonalMatrix m;
    m.diag.resize(n);
    m.upper.assign(n - 1, -inv);
    m.lower.assign(n - 1, -inv);
    for (std::size_t i = 0; i < n; ++i) m.diag[i] = 2.0 * inv + V(grid[i]);
    if (boundary == BoundaryMode::even_reflect_at_zero) {
        if (x_min != 0.0) throw config_error("stationary_eigs_fd: even-reflect grid must start at 0");
        m.upper[0] = -2.0 * inv;
    }

    const SymmetrizedTridiagonal sym = symmetrize(m);
    std::vector<double> eigs = symmetric_tridiagonal_eigenvalues(sym.diag, sym.off);
    std::sort(eigs.begin(), eigs.end());
    eigs.resize(static_cast<std::size_t>(count));
    return eigs;
}

std::vector<double> stationary_eigs_fd(const ModelParams& params, double u_const, double x_max,
                                       int points, int count) {
    params.validate();
    if (!(u_const > 0.0)) throw std::domain_error("stationary_eigs_fd: u must be positive");
    const PumpProfile pump = PumpProfile::constant(u_const);
    const PotentialCoeffs coeffs = potential_coeffs(params, pump, 0.0);
    auto V = [&](double x) { return coeffs.eval(x); };

    std::vector<double> eigs;
    if (params.k == 0.0) {
        eigs = stationary_eigs_fd_potential(V, 0.0, x_max, points,
                                            BoundaryMode::even_reflect_at_zero, count);
    } else {
        // wall at the singular origin; first grid point at dx
        const double dx = x_max / points;
        eigs = stationary_eigs_fd_potential(V, dx, x_max, points, BoundaryMode::dirichlet_both,
                                            count);
    }
    const double well_edge = coeffs.eval(x_max);
    if (eigs.back() > well_edge) {
        std::ostringstream os;
        os << "stationary_eigs_fd: state " << count - 1 << " (E = " << eigs.back()
           << ") is not confined by the grid (V(x_max) = " << well_edge << ")";
        throw config_error(os.str());
    }
    return eigs;
}

}  // namespace qes
