#include "qes/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "qes/errors.hpp"
#include "qes/quadrature.hpp"

namespace qes {

namespace {

double grid_spacing(std::span<const double> grid, const char* who) {
    if (grid.size() < 2) throw config_error(std::string(who) + ": grid too small");
    const double h = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (std::abs((grid[i + 1] - grid[i]) - h) > 1e-9 * h)
            throw config_error(std::string(who) + ": grid must be uniform");
    }
    return h;
}

}  // namespace

ResidualReport pde_residual_potential(const FieldSampler& sampler,
                                      const std::function<double(double, double)>& V,
                                      std::span<const double> grid, double t, double dtau) {
    const std::size_t n = grid.size();
    if (n < 5) throw config_error("pde_residual: grid too coarse for the 4th-order stencil");
    if (!(dtau > 0.0)) throw config_error("pde_residual: dtau must be positive");
    const double dx = grid_spacing(grid, "pde_residual");

    // five time levels for the 4th-order time stencil
    const WaveField fm2 = sampler(grid, t - 2.0 * dtau);
    const WaveField fm1 = sampler(grid, t - dtau);
    const WaveField f0 = sampler(grid, t);
    const WaveField fp1 = sampler(grid, t + dtau);
    const WaveField fp2 = sampler(grid, t + 2.0 * dtau);

    double psi_max = 0.0;
    for (const auto& v : f0.values) psi_max = std::max(psi_max, std::abs(v));
    const double cutoff = 1e-12 * psi_max;

    const std::complex<double> iunit{0.0, 1.0};
    double r_max = 0.0;
    double scale_max = 0.0;
    int counted = 0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        if (std::abs(f0.values[i]) <= cutoff) continue;
        const std::complex<double> dpsi_dt =
            (-fp2.values[i] + 8.0 * fp1.values[i] - 8.0 * fm1.values[i] + fm2.values[i]) /
            (12.0 * dtau);
        const std::complex<double> dpsi_dxx =
            (-f0.values[i + 2] + 16.0 * f0.values[i + 1] - 30.0 * f0.values[i] +
             16.0 * f0.values[i - 1] - f0.values[i - 2]) /
            (12.0 * dx * dx);
        const std::complex<double> v_psi = V(grid[i], t) * f0.values[i];
        const std::complex<double> residual = iunit * dpsi_dt + dpsi_dxx - v_psi;
        r_max = std::max(r_max, std::abs(residual));
        scale_max = std::max(scale_max, std::abs(dpsi_dxx) + std::abs(v_psi));
        ++counted;
    }
    if (counted == 0) throw config_error("pde_residual: no interior points above the cutoff");

    ResidualReport report;
    report.dx = dx;
    report.dtau = dtau;
    report.stencil_order = 4;
    report.max_rel_residual = r_max / std::max(scale_max, std::numeric_limits<double>::min());
    report.interior_points = counted;
    return report;
}

ResidualReport pde_residual(const FieldSampler& sampler, const ModelParams& params,
                            const PumpProfile& profile, std::span<const double> grid, double t,
                            double dtau, PotentialMutation mutation) {
    auto V = [&](double x, double tt) { return potential(params, profile, x, tt, mutation); };
    return pde_residual_potential(sampler, V, grid, t, dtau);
}

std::vector<ResidualReport> residual_ladder(const FieldSampler& sampler, const ModelParams& params,
                                            const PumpProfile& profile, double x_lo, double x_hi,
                                            double dx0, double dtau0, int levels, double t,
                                            PotentialMutation mutation, int jobs) {
    if (levels < 1) throw config_error("residual_ladder: need at least one level");
    std::vector<ResidualReport> out(static_cast<std::size_t>(levels));

    auto run_level = [&](int lvl) {
        const double scale = std::pow(2.0, -lvl);
        const double dx = dx0 * scale;
        const int points = static_cast<int>(std::llround((x_hi - x_lo) / dx)) + 1;
        const std::vector<double> grid = uniform_grid(x_lo, x_hi, points);
        out[static_cast<std::size_t>(lvl)] =
            pde_residual(sampler, params, profile, grid, t, dtau0 * scale, mutation);
    };

    if (jobs <= 1) {
        for (int lvl = 0; lvl < levels; ++lvl) run_level(lvl);
    } else {
        const int nworkers = std::min(jobs, levels);
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(nworkers));
        for (int w = 0; w < nworkers; ++w) {
            workers.emplace_back([&, w] {
                for (int lvl = w; lvl < levels; lvl += nworkers) run_level(lvl);
            });
        }
        for (auto& th : workers) th.join();
    }
    return out;
}

SlopeFit residual_slope(std::span<const ResidualReport> ladder, double floor) {
    std::vector<double> lx, ly;
    for (const auto& r : ladder) {
        if (r.max_rel_residual >= floor) {
            lx.push_back(std::log(r.dx));
            ly.push_back(std::log(r.max_rel_residual));
        }
    }
    const int used = static_cast<int>(lx.size());
    if (used < 2) return {std::numeric_limits<double>::quiet_NaN(), used};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < used; ++i) {
        sx += lx[static_cast<std::size_t>(i)];
        sy += ly[static_cast<std::size_t>(i)];
        sxx += lx[static_cast<std::size_t>(i)] * lx[static_cast<std::size_t>(i)];
        sxy += lx[static_cast<std::size_t>(i)] * ly[static_cast<std::size_t>(i)];
    }
    const double slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
    return {slope, used};
}

double norm(const WaveField& field) {
    const double h = grid_spacing(field.grid, "norm");
    std::vector<double> abs2(field.values.size());
    for (std::size_t i = 0; i < field.values.size(); ++i) abs2[i] = std::norm(field.values[i]);
    return simpson<double>(abs2, h);
}

std::complex<double> inner(const WaveField& a, const WaveField& b) {
    if (a.grid.size() != b.grid.size() || a.grid.front() != b.grid.front() ||
        a.grid.back() != b.grid.back())
        throw config_error("inner: fields must share one grid");
    const double h = grid_spacing(a.grid, "inner");
    std::vector<std::complex<double>> prod(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i)
        prod[i] = std::conj(a.values[i]) * b.values[i];
    return simpson<std::complex<double>>(prod, h);
}

std::vector<std::vector<double>> orthogonality_matrix(const ModelParams& params,
                                                      const SpectralData& spectral,
                                                      std::span<const double> grid) {
    const double h = grid_spacing(grid, "orthogonality_matrix");
    const std::size_t modes = spectral.eigenvectors.size();
    const std::size_t n = grid.size();

    // gauged eigenfunctions y^k exp(-y^4/4 - beta y^2/2) phi_j(y)
    std::vector<std::vector<double>> g(modes, std::vector<double>(n));
    for (std::size_t j = 0; j < modes; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double y = grid[i];
            const double y2 = y * y;
            double envelope = std::exp(-0.25 * y2 * y2 - 0.5 * params.beta * y2);
            if (params.k != 0.0) envelope *= (y > 0.0) ? std::pow(y, params.k) : 0.0;
            g[j][i] = envelope * spectral.eigenvectors[j](y);
        }
    }

    std::vector<std::vector<double>> gram(modes, std::vector<double>(modes, 0.0));
    std::vector<double> prod(n);
    for (std::size_t a = 0; a < modes; ++a) {
        for (std::size_t b = a; b < modes; ++b) {
            for (std::size_t i = 0; i < n; ++i) prod[i] = g[a][i] * g[b][i];
            gram[a][b] = gram[b][a] = simpson<double>(prod, h);
        }
    }
    for (std::size_t a = 0; a < modes; ++a) {
        for (std::size_t b = 0; b < modes; ++b) {
            if (a != b) gram[a][b] /= std::sqrt(gram[a][a] * gram[b][b]);
        }
    }
    for (std::size_t a = 0; a < modes; ++a) gram[a][a] = 1.0;
    return gram;
}

double max_offdiagonal(const std::vector<std::vector<double>>& gram) {
    double worst = 0.0;
    for (std::size_t a = 0; a < gram.size(); ++a)
        for (std::size_t b = 0; b < gram[a].size(); ++b)
            if (a != b) worst = std::max(worst, std::abs(gram[a][b]));
    return worst;
}

}  // namespace qes
