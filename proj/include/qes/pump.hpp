#ifndef QES_PUMP_HPP
#define QES_PUMP_HPP

#include <string>

namespace qes {

enum class PumpKind { constant, exponential, sinusoidal, rational };

std::string to_string(PumpKind kind);

/// u(t) together with its first two derivatives and the running integral
/// from 0 to t. All four come from closed forms, never from differencing.
struct PumpSample {
    double u;
    double du;
    double ddu;
    double integral;
};

/// Positive time-dependent drive u(t).
///
/// Supported shapes:
///   constant     u(t) = u0
///   exponential  u(t) = u0 * exp(-alpha t)
///   sinusoidal   u(t) = a + b sin(omega t)      (requires a > |b|)
///   rational     u(t) = u0 / (1 + gamma t)^2
///
/// Derivatives are analytic per kind: the drive enters the potential through
/// (3 u'^2 - 2 u u'') / u^4, where finite-difference noise would be amplified,
/// so numerical differentiation is reserved for test oracles.
class PumpProfile {
public:
    static PumpProfile constant(double u0);
    static PumpProfile exponential(double u0, double alpha);
    static PumpProfile sinusoidal(double a, double b, double omega);
    static PumpProfile rational(double u0, double gamma);

    PumpKind kind() const { return kind_; }
    double p0() const { return p0_; }
    double p1() const { return p1_; }
    double p2() const { return p2_; }

    /// Evaluate u, u', u'' and the running integral at t >= 0.
    /// Throws std::domain_error if u(t) <= 0, naming the offending t.
    PumpSample sample(double t) const;

    /// Analytic minimum of u over [0, horizon]. Throws std::domain_error if
    /// the profile has a pole inside the horizon (rational, gamma < 0).
    double min_on(double horizon) const;

    /// Positivity check by analytic minimum, not sampling.
    void validate_on(double horizon) const;

private:
    PumpProfile(PumpKind kind, double p0, double p1, double p2)
        : kind_(kind), p0_(p0), p1_(p1), p2_(p2) {}

    PumpKind kind_;
    double p0_, p1_, p2_;
};

PumpSample eval_pump(const PumpProfile& profile, double t);

/// h(t) = (3 u'^2 - 2 u u'') / (64 u^4) + n. Constant drives give h = n exactly.
double h_of_t(const PumpProfile& profile, double t, int n);

/// Gauge factor f(t) = 4 u(t): the stationary eigenphase advances as
/// exp(-i lambda * integral of f), and the constant-u energies are 4 u lambda.
double gauge_factor(const PumpProfile& profile, double t);

}  // namespace qes

#endif
