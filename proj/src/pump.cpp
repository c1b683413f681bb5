#include "qes/pump.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qes {

std::string to_string(PumpKind kind) {
    switch (kind) {
        case PumpKind::constant: return "constant";
        case PumpKind::exponential: return "exponential";
        case PumpKind::sinusoidal: return "sinusoidal";
        case PumpKind::rational: return "rational";
    }
    return "unknown";
}

PumpProfile PumpProfile::constant(double u0) {
    return PumpProfile(PumpKind::constant, u0, 0.0, 0.0);
}

PumpProfile PumpProfile::exponential(double u0, double alpha) {
    return PumpProfile(PumpKind::exponential, u0, alpha, 0.0);
}

PumpProfile PumpProfile::sinusoidal(double a, double b, double omega) {
    return PumpProfile(PumpKind::sinusoidal, a, b, omega);
}

PumpProfile PumpProfile::rational(double u0, double gamma) {
    return PumpProfile(PumpKind::rational, u0, gamma, 0.0);
}

namespace {

[[noreturn]] void throw_nonpositive(double t, double u) {
    std::ostringstream os;
    os << "pump: u(t) = " << u << " is not positive at t = " << t;
    throw std::domain_error(os.str());
}

}  // namespace

PumpSample PumpProfile::sample(double t) const {
    PumpSample s{};
    switch (kind_) {
        case PumpKind::constant: {
            s.u = p0_;
            s.du = 0.0;
            s.ddu = 0.0;
            s.integral = p0_ * t;
            break;
        }
        case PumpKind::exponential: {
            const double u0 = p0_;
            const double alpha = p1_;
            s.u = u0 * std::exp(-alpha * t);
            s.du = -alpha * s.u;
            s.ddu = alpha * alpha * s.u;
            // (1 - exp(-alpha t)) / alpha via expm1, exact limit at alpha = 0
            s.integral = (alpha == 0.0) ? u0 * t : u0 * (-std::expm1(-alpha * t)) / alpha;
            break;
        }
        case PumpKind::sinusoidal: {
            const double a = p0_;
            const double b = p1_;
            const double omega = p2_;
            const double sn = std::sin(omega * t);
            const double cs = std::cos(omega * t);
            s.u = a + b * sn;
            s.du = b * omega * cs;
            s.ddu = -b * omega * omega * sn;
            if (omega == 0.0) {
                s.integral = a * t;
            } else {
                const double half = std::sin(0.5 * omega * t);
                s.integral = a * t + b * (2.0 * half * half) / omega;  // b(1-cos)/omega
            }
            break;
        }
        case PumpKind::rational: {
            const double u0 = p0_;
            const double gamma = p1_;
            const double den = 1.0 + gamma * t;
            if (den <= 0.0) throw_nonpositive(t, -1.0);
            s.u = u0 / (den * den);
            s.du = -2.0 * gamma * u0 / (den * den * den);
            s.ddu = 6.0 * gamma * gamma * u0 / (den * den * den * den);
            s.integral = u0 * t / den;
            break;
        }
    }
    if (!(s.u > 0.0)) throw_nonpositive(t, s.u);
    return s;
}

double PumpProfile::min_on(double horizon) const {
    switch (kind_) {
        case PumpKind::constant:
            return p0_;
        case PumpKind::exponential:
            // decreasing for alpha > 0, increasing for alpha < 0
            return p1_ >= 0.0 ? p0_ * std::exp(-p1_ * horizon) : p0_;
        case PumpKind::sinusoidal:
            // global analytic minimum; conservative if the horizon is short
            return p0_ - std::abs(p1_);
        case PumpKind::rational: {
            const double den = 1.0 + p1_ * horizon;
            if (den <= 0.0) {
                std::ostringstream os;
                os << "pump: rational profile has a pole at t = " << (-1.0 / p1_)
                   << " inside horizon [0, " << horizon << "]";
                throw std::domain_error(os.str());
            }
            return p1_ >= 0.0 ? p0_ / (den * den) : p0_;
        }
    }
    return 0.0;
}

void PumpProfile::validate_on(double horizon) const {
    if (!(horizon >= 0.0)) throw std::domain_error("pump: horizon must be non-negative");
    const double umin = min_on(horizon);
    if (!(umin > 0.0)) {
        std::ostringstream os;
        os << "pump: " << to_string(kind_) << " profile is not positive on [0, " << horizon
           << "] (analytic minimum " << umin << ")";
        throw std::domain_error(os.str());
    }
}

PumpSample eval_pump(const PumpProfile& profile, double t) {
    if (t < 0.0) throw std::domain_error("pump: t must be non-negative");
    return profile.sample(t);
}

double h_of_t(const PumpProfile& profile, double t, int n) {
    const PumpSample s = eval_pump(profile, t);
    const double u2 = s.u * s.u;
    return (3.0 * s.du * s.du - 2.0 * s.u * s.ddu) / (64.0 * u2 * u2) + static_cast<double>(n);
}

double gauge_factor(const PumpProfile& profile, double t) {
    return 4.0 * eval_pump(profile, t).u;
}

}  // namespace qes
