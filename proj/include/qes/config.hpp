#ifndef QES_CONFIG_HPP
#define QES_CONFIG_HPP

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qes/algebra.hpp"
#include "qes/model.hpp"
#include "qes/pump.hpp"

namespace qes {

/// Every threshold the commands test against, overridable from the config
/// file under tolerances.<name>. Values are pinned here, not recalibrated.
struct ToleranceSet {
    double eigen_residual = 1e-12;
    double residual_max = 1e-6;
    double slope_min = 3.0;
    double residual_floor = 1e-9;
    double mutation_plateau = 1e-4;
    double norm_drift = 1e-8;
    double gram_offdiag = 1e-8;
    double discrete_gram_offdiag = 1e-10;
    double cn_norm_drift = 1e-10;
    double fidelity_min = 0.999;
    double smoke_norm_drift = 1e-12;
};

/// Fully resolved run configuration. Parsed from a flat key = value file
/// with dotted section paths; validation reports every offending field path.
struct RunConfig {
    ModelParams params;
    PumpProfile pump = PumpProfile::constant(1.0);
    double horizon = 1.0;

    int grid_points = 4001;
    double x_max = 0.0;   // resolved: override or truncation radius
    double x_min = 0.0;   // resolved: 0 for k = 0, dx for k > 0
    bool x_max_overridden = false;
    bool x_min_overridden = false;

    SuperpositionSpec superposition;
    std::string output_dir = "out";
    ToleranceSet tol;

    std::vector<double> wave_times{0.0};

    double verify_t = 0.5;
    double verify_dx = 1e-3;
    double verify_dtau = 1e-4;
    int verify_levels = 5;
    double verify_x_lo = 0.0;  // resolved residual window
    double verify_x_hi = 0.0;

    double prop_t0 = 0.0;
    double prop_t1 = 1.0;
    int prop_steps = 8000;
    int prop_checkpoints = 5;
    bool prop_smoke = false;

    /// Flat key/value view of the resolved configuration, in canonical
    /// order, for provenance blocks.
    std::vector<std::pair<std::string, std::string>> resolved() const;
    std::vector<std::pair<std::string, std::string>> resolved_tolerances() const;
};

/// Parse "a", "-2.5i", "1+0.5i", ... (used for superposition weights).
std::complex<double> parse_complex(const std::string& text);

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace qes

#endif
