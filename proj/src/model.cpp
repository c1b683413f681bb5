#include "qes/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qes {

std::vector<std::string> potential_mutation_names() {
    return {"sextic-scale", "quartic-sign", "linear-shift", "drive-drop", "centrifugal-flip"};
}

PotentialMutation potential_mutation_from_name(const std::string& name) {
    if (name == "none") return PotentialMutation::none;
    if (name == "sextic-scale") return PotentialMutation::sextic_scale;
    if (name == "quartic-sign") return PotentialMutation::quartic_sign;
    if (name == "linear-shift") return PotentialMutation::linear_shift;
    if (name == "drive-drop") return PotentialMutation::drive_drop;
    if (name == "centrifugal-flip") return PotentialMutation::centrifugal_flip;
    throw std::invalid_argument("unknown potential mutation '" + name + "'");
}

std::string to_string(PotentialMutation m) {
    switch (m) {
        case PotentialMutation::none: return "none";
        case PotentialMutation::sextic_scale: return "sextic-scale";
        case PotentialMutation::quartic_sign: return "quartic-sign";
        case PotentialMutation::linear_shift: return "linear-shift";
        case PotentialMutation::drive_drop: return "drive-drop";
        case PotentialMutation::centrifugal_flip: return "centrifugal-flip";
    }
    return "unknown";
}

double PotentialCoeffs::eval(double x) const {
    const double x2 = x * x;
    double v = ((c6 * x2 + c4) * x2 + c2) * x2;
    if (c_inv != 0.0) {
        if (x == 0.0)
            throw std::domain_error("potential: x = 0 with nonzero centrifugal coefficient");
        v += c_inv / x2;
    }
    return v;
}

PotentialCoeffs potential_coeffs(const ModelParams& params, const PumpProfile& profile, double t,
                                 PotentialMutation mutation) {
    const PumpSample s = eval_pump(profile, t);
    const double u = s.u;
    const double u2 = u * u;
    const double beta = params.beta;
    const double k = params.k;

    double linear = 4.0 * params.n + 3.0 + 2.0 * k;
    double drive = (3.0 * s.du * s.du - 2.0 * s.u * s.ddu) / (16.0 * u2 * u2);
    double sextic = u2 * u2;
    double quartic = 2.0 * beta * u2 * u;
    double centrifugal = k * (k - 1.0);

    switch (mutation) {
        case PotentialMutation::none: break;
        case PotentialMutation::sextic_scale: sextic *= 1.05; break;
        case PotentialMutation::quartic_sign: quartic = -quartic; break;
        case PotentialMutation::linear_shift: linear += 1.0; break;
        case PotentialMutation::drive_drop: drive = 0.0; break;
        case PotentialMutation::centrifugal_flip: centrifugal = k * (k + 1.0); break;
    }

    return PotentialCoeffs{
        .c6 = sextic,
        .c4 = quartic,
        .c2 = (beta * beta - linear - drive) * u2,
        .c_inv = centrifugal,
    };
}

double potential(const ModelParams& params, const PumpProfile& profile, double x, double t,
                 PotentialMutation mutation) {
    return potential_coeffs(params, profile, t, mutation).eval(x);
}

double sigma(const ModelParams& params, const PumpProfile& profile, double x, double t) {
    const PumpSample s = eval_pump(profile, t);
    const double x2 = x * x;
    double value = -0.25 * s.u * s.u * x2 * x2 - 0.5 * params.beta * s.u * x2;
    if (params.k != 0.0) {
        if (x <= 0.0) throw std::domain_error("sigma: x must be positive when k > 0");
        value += params.k * std::log(x);
    }
    return value;
}

double mod_prefactor(const ModelParams& params, const PumpProfile& profile, double x, double t) {
    const PumpSample s = eval_pump(profile, t);
    const double x2 = x * x;
    const double envelope = std::exp(-0.25 * s.u * s.u * x2 * x2 - 0.5 * params.beta * s.u * x2);
    if (params.k == 0.0) return envelope;
    if (x <= 0.0) throw std::domain_error("mod_prefactor: x must be positive when k > 0");
    return std::pow(x, params.k) * envelope;
}

SuperpositionSpec SuperpositionSpec::single(int mode) {
    return SuperpositionSpec{{{mode, {1.0, 0.0}}}};
}

SuperpositionSpec SuperpositionSpec::equal_weights(int count) {
    SuperpositionSpec spec;
    const double w = 1.0 / std::sqrt(static_cast<double>(count));
    for (int j = 0; j < count; ++j) spec.terms.push_back({j, {w, 0.0}});
    return spec;
}

void SuperpositionSpec::validate(int n) const {
    if (terms.empty())
        throw std::domain_error("superposition: at least one mode required");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].mode < 0 || terms[i].mode > n) {
            std::ostringstream os;
            os << "superposition.modes: mode " << terms[i].mode << " outside 0.." << n;
            throw std::domain_error(os.str());
        }
        for (std::size_t j = i + 1; j < terms.size(); ++j)
            if (terms[i].mode == terms[j].mode)
                throw std::domain_error("superposition.modes: modes must be distinct");
    }
}

void WaveField::validate() const {
    if (grid.size() != values.size())
        throw std::invalid_argument("wavefield: grid/value length mismatch");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw std::invalid_argument("wavefield: grid must be strictly increasing");
    for (const auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("wavefield: non-finite value");
}

WaveField psi_closed_form(const ModelParams& params, const PumpProfile& profile,
                          const SpectralData& spectral, const SuperpositionSpec& spec,
                          std::span<const double> grid, double t) {
    params.validate();
    spec.validate(params.n);
    if (spectral.eigenvalues.size() != static_cast<std::size_t>(params.n) + 1 ||
        spectral.eigenvectors.size() != spectral.eigenvalues.size())
        throw std::invalid_argument("psi_closed_form: spectral data does not match params.n");
    const PumpSample s = eval_pump(profile, t);
    const double sqrt_u = std::sqrt(s.u);
    const double u_power = std::pow(s.u, 0.25 * (2.0 * params.k + 1.0));
    const double chirp = s.du / (8.0 * s.u);

    WaveField field;
    field.time = t;
    field.grid.assign(grid.begin(), grid.end());
    field.values.resize(grid.size());

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const double base_amp = mod_prefactor(params, profile, x, t) * u_power;
        const double base_phase = -chirp * x * x;
        std::complex<double> acc{0.0, 0.0};
        for (const auto& term : spec.terms) {
            const double lambda = spectral.eigenvalues[static_cast<std::size_t>(term.mode)];
            const double amp =
                base_amp * spectral.eigenvectors[static_cast<std::size_t>(term.mode)](sqrt_u * x);
            const double phase = base_phase - 4.0 * lambda * s.integral;
            // not std::polar: amp may be negative where phi changes sign
            acc += term.weight * std::complex<double>(amp * std::cos(phase), amp * std::sin(phase));
        }
        field.values[i] = acc;
    }
    field.validate();
    return field;
}

double truncation_radius(const PumpProfile& profile, double horizon) {
    const double umin = profile.min_on(horizon);
    if (!(umin > 0.0)) throw std::domain_error("truncation_radius: drive not positive on horizon");
    return std::pow(160.0 / (umin * umin), 0.25) + 2.0;
}

std::vector<double> uniform_grid(double x0, double x1, int points) {
    if (points < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
    if (!(x0 < x1)) throw std::invalid_argument("uniform_grid: x0 must be < x1");
    std::vector<double> g(static_cast<std::size_t>(points));
    const double h = (x1 - x0) / (points - 1);
    for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = x0 + h * i;
    g.back() = x1;
    return g;
}

}  // namespace qes
