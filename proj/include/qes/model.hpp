#ifndef QES_MODEL_HPP
#define QES_MODEL_HPP

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qes/algebra.hpp"
#include "qes/pump.hpp"

namespace qes {

/// Single mutations of the potential, used as negative controls by the
/// residual verifier: each one must push the PDE residual off its floor.
enum class PotentialMutation {
    none,
    sextic_scale,      // x^6 coefficient scaled by 1.05
    quartic_sign,      // sign of the 2 beta u^3 x^4 term flipped
    linear_shift,      // (4n+3+2k) -> (4n+4+2k) in the x^2 coefficient
    drive_drop,        // drive term (3u'^2-2uu'')/(16u^4) dropped
    centrifugal_flip,  // k(k-1) -> k(k+1)
};

std::vector<std::string> potential_mutation_names();
PotentialMutation potential_mutation_from_name(const std::string& name);
std::string to_string(PotentialMutation m);

/// V(x,t) = c6 x^6 + c4 x^4 + c2 x^2 + c_inv / x^2 at a fixed time.
struct PotentialCoeffs {
    double c6;
    double c4;
    double c2;
    double c_inv;

    double eval(double x) const;  // domain error at x = 0 when c_inv != 0
};

PotentialCoeffs potential_coeffs(const ModelParams& params, const PumpProfile& profile, double t,
                                 PotentialMutation mutation = PotentialMutation::none);

/// V(x,t) = u^4 x^6 + 2 beta u^3 x^4
///        + (beta^2 - (4n+3+2k) - (3u'^2-2uu'')/(16u^4)) u^2 x^2 + k(k-1)/x^2
double potential(const ModelParams& params, const PumpProfile& profile, double x, double t,
                 PotentialMutation mutation = PotentialMutation::none);

/// sigma(x,t) = -(u^2/4) x^4 - (beta u / 2) x^2 + k log x.
/// x <= 0 is a domain error unless k = 0 (whole-line mode, log term absent).
double sigma(const ModelParams& params, const PumpProfile& profile, double x, double t);

/// exp(sigma), computed as x^k exp(-u^2 x^4/4 - beta u x^2/2) so small x
/// never goes through a logarithm.
double mod_prefactor(const ModelParams& params, const PumpProfile& profile, double x, double t);

/// Superposition of algebraic modes with complex weights.
struct SuperpositionTerm {
    int mode;
    std::complex<double> weight;
};

struct SuperpositionSpec {
    std::vector<SuperpositionTerm> terms;

    static SuperpositionSpec single(int mode);
    static SuperpositionSpec equal_weights(int count);
    void validate(int n) const;  // distinct modes within 0..n
};

/// Complex samples of psi on a spatial grid at a fixed time.
struct WaveField {
    std::vector<double> grid;
    std::vector<std::complex<double>> values;
    double time = 0.0;

    void validate() const;  // matching lengths, increasing grid, finite values
};

/// Exact solution
///   psi(x,t) = exp(sigma - i (u'/8u) x^2 + ((2k+1)/4) log u - 4 i lambda_j I(t))
///              * phi_j(sqrt(u) x),   I(t) = integral of u,
/// summed over the superposition terms. Amplitude and phase are accumulated
/// separately so exp(sigma) can underflow harmlessly at large |x|.
WaveField psi_closed_form(const ModelParams& params, const PumpProfile& profile,
                          const SpectralData& spectral, const SuperpositionSpec& spec,
                          std::span<const double> grid, double t);

/// Grid extent (160 / u_min^2)^(1/4) + 2 with u_min the analytic minimum of
/// the drive on [0, horizon]; the quartic envelope is below e^-40 there.
double truncation_radius(const PumpProfile& profile, double horizon);

std::vector<double> uniform_grid(double x0, double x1, int points);

}  // namespace qes

#endif
