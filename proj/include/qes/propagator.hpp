#ifndef QES_PROPAGATOR_HPP
#define QES_PROPAGATOR_HPP

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qes/model.hpp"

namespace qes {

/// dirichlet_both pins both end rows; even_reflect_at_zero closes the left
/// end with the ghost point psi(-dx) = psi(dx) (even-parity grids starting
/// at x = 0, only meaningful for k = 0).
enum class BoundaryMode { dirichlet_both, even_reflect_at_zero };

std::string to_string(BoundaryMode mode);

struct PropagationConfig {
    double x_min = 0.0;
    double x_max = 0.0;
    int points = 0;
    double t0 = 0.0;
    double t1 = 0.0;
    int steps = 0;
    BoundaryMode boundary = BoundaryMode::dirichlet_both;

    void validate() const;  // points >= 201, steps >= 100, t1 > t0
    std::vector<double> make_grid() const;
};

/// Solve a complex tridiagonal system in place (Thomas algorithm).
/// lower[i] couples x[i-1] into row i; upper[i] couples x[i+1] into row i.
/// Pivots of the Crank-Nicolson matrices never vanish; a zero pivot throws.
std::vector<std::complex<double>> thomas_solve(std::span<const std::complex<double>> lower,
                                               std::span<const std::complex<double>> diag,
                                               std::span<const std::complex<double>> upper,
                                               std::vector<std::complex<double>> rhs);

/// Crank-Nicolson propagation of i psi_t = -psi_xx + V(x,t) psi:
///   (I + i dt/2 H(t_mid)) psi_next = (I - i dt/2 H(t_mid)) psi
/// with the 2nd-order central Laplacian and V at the step midpoint.
/// The observer, when set, is called with (step, field) after every step.
using StepObserver = std::function<void(int step, const WaveField&)>;

WaveField propagate_potential(const WaveField& initial,
                              const std::function<double(double, double)>& V,
                              const PropagationConfig& cfg, const StepObserver& observer = {});

/// Family potential wrapper; even_reflect is rejected unless k = 0.
WaveField propagate(const WaveField& initial, const ModelParams& params,
                    const PumpProfile& profile, const PropagationConfig& cfg,
                    const StepObserver& observer = {});

/// Trapezoid discrete norm integral matching the conservation property of
/// the Cayley scheme (half weights at the end points).
double discrete_norm(const WaveField& field);

/// |<a,b>|^2 / (norm(a) norm(b)) with Simpson quadrature; in [0,1] up to
/// rounding and invariant under global phases. Zero-norm input is a
/// domain error.
double fidelity(const WaveField& a, const WaveField& b);

/// Lowest eigenvalues of the FD Hamiltonian -psi_xx + V(x) psi on a uniform
/// grid via the symmetric tridiagonal QL kernel. even_reflect grids start
/// at x = 0 and see only the even-parity spectrum. points is capped at 8001.
std::vector<double> stationary_eigs_fd_potential(const std::function<double(double)>& V,
                                                 double x_min, double x_max, int points,
                                                 BoundaryMode boundary, int count);

/// Constant-drive family spectrum: boundary per k (even reflect at zero for
/// k = 0, Dirichlet wall at the singular origin otherwise, first grid point
/// at dx). Checks that the requested states sit below the well edge.
std::vector<double> stationary_eigs_fd(const ModelParams& params, double u_const, double x_max,
                                       int points, int count);

}  // namespace qes

#endif
