#ifndef QES_VERIFY_HPP
#define QES_VERIFY_HPP

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qes/model.hpp"

namespace qes {

/// Outcome of one finite-difference substitution of a candidate solution
/// into i psi_t = -psi_xx + V psi. Residuals are reported over interior
/// points only (two-point stencil margin excluded) and normalized by the
/// largest |psi_xx| + |V psi| so the x^6 growth of V keeps the measure
/// meaningful.
struct ResidualReport {
    double dx = 0.0;
    double dtau = 0.0;
    int stencil_order = 4;
    double max_rel_residual = 0.0;
    int interior_points = 0;
};

/// Evaluates the candidate solution on a grid at a requested time.
using FieldSampler = std::function<WaveField(std::span<const double> grid, double t)>;

/// Residual of a candidate against i psi_t + psi_xx - V psi = 0 with an
/// arbitrary potential V(x,t): 4th-order central stencils in both x and t.
/// Points with |psi| <= 1e-12 max|psi| are excluded.
ResidualReport pde_residual_potential(const FieldSampler& sampler,
                                      const std::function<double(double, double)>& V,
                                      std::span<const double> grid, double t, double dtau);

/// Same, with V taken from the model family (optionally mutated: the
/// negative controls of the verification suite).
ResidualReport pde_residual(const FieldSampler& sampler, const ModelParams& params,
                            const PumpProfile& profile, std::span<const double> grid, double t,
                            double dtau, PotentialMutation mutation = PotentialMutation::none);

/// Dyadic refinement ladder: level i uses dx0/2^i, dtau0/2^i on [x_lo, x_hi].
/// Level runs are independent; jobs > 1 computes them in parallel.
std::vector<ResidualReport> residual_ladder(const FieldSampler& sampler, const ModelParams& params,
                                            const PumpProfile& profile, double x_lo, double x_hi,
                                            double dx0, double dtau0, int levels, double t,
                                            PotentialMutation mutation = PotentialMutation::none,
                                            int jobs = 1);

/// Least-squares slope of log(residual) vs log(dx) over the ladder levels
/// above the rounding floor. Returns the slope and how many levels entered
/// the fit (slope is NaN when fewer than 2 qualify).
struct SlopeFit {
    double slope;
    int levels_used;
};

SlopeFit residual_slope(std::span<const ResidualReport> ladder, double floor = 1e-9);

/// Composite Simpson integral of |psi|^2 over the field's uniform grid.
double norm(const WaveField& field);

/// Composite Simpson integral of conj(a) * b; grids must match.
std::complex<double> inner(const WaveField& a, const WaveField& b);

/// Normalized Gram matrix of the gauged eigenfunctions
/// y^k exp(-y^4/4 - beta y^2/2) phi_j(y) on the given grid.
/// Self-adjointness makes the off-diagonals vanish for distinct eigenvalues.
std::vector<std::vector<double>> orthogonality_matrix(const ModelParams& params,
                                                      const SpectralData& spectral,
                                                      std::span<const double> grid);

double max_offdiagonal(const std::vector<std::vector<double>>& gram);

}  // namespace qes

#endif
