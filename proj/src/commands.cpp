#include "qes/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "qes/errors.hpp"
#include "qes/format.hpp"
#include "qes/propagator.hpp"
#include "qes/verify.hpp"

namespace qes {

namespace {

using ordered_json = nlohmann::ordered_json;

namespace fs = std::filesystem;

fs::path resolve_out_dir(const RunConfig& cfg, const CommandOptions& opts) {
    const fs::path dir = opts.out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(opts.out_dir);
    fs::create_directories(dir);
    return dir;
}

ordered_json kv_to_json(const std::vector<std::pair<std::string, std::string>>& kv) {
    ordered_json j = ordered_json::object();
    for (const auto& [key, value] : kv) j[key] = value;
    return j;
}

ordered_json provenance(const RunConfig& cfg) {
    ordered_json j = ordered_json::object();
    j["config"] = kv_to_json(cfg.resolved());
    j["tolerances"] = kv_to_json(cfg.resolved_tolerances());
    const PumpSample at0 = eval_pump(cfg.pump, 0.0);
    j["pump"] = {{"kind", to_string(cfg.pump.kind())},
                 {"u_at_0", at0.u},
                 {"u_min_on_horizon", cfg.pump.min_on(cfg.horizon)},
                 {"h_at_0", h_of_t(cfg.pump, 0.0, cfg.params.n)}};
    return j;
}

void write_json(const fs::path& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write '" + path.string() + "'");
    out << j.dump(2) << "\n";
}

void write_wavefield_csv(const fs::path& path, const WaveField& field, const RunConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write '" + path.string() + "'");
    out << "# t=" << format_double(field.time) << " params.n=" << cfg.params.n
        << " params.k=" << format_double(cfg.params.k)
        << " params.beta=" << format_double(cfg.params.beta)
        << " pump.kind=" << to_string(cfg.pump.kind()) << "\n";
    out << "x,re,im,abs2\n";
    for (std::size_t i = 0; i < field.grid.size(); ++i) {
        out << format_double(field.grid[i]) << "," << format_double(field.values[i].real()) << ","
            << format_double(field.values[i].imag()) << ","
            << format_double(std::norm(field.values[i])) << "\n";
    }
}

SpectralData solve_spectrum(const RunConfig& cfg) {
    return eigensolve(build_h0_matrix(cfg.params));
}

std::vector<double> command_grid(const RunConfig& cfg) {
    return uniform_grid(cfg.x_min, cfg.x_max, cfg.grid_points);
}

}  // namespace

int cmd_spectrum(const RunConfig& cfg, const CommandOptions& opts) {
    const fs::path dir = resolve_out_dir(cfg, opts);
    const TridiagonalMatrix matrix = build_h0_matrix(cfg.params);
    const SpectralData spectral = eigensolve(matrix);
    const double residual = eigen_residual(matrix, spectral);
    const double gap = min_eigenvalue_gap(spectral);
    const bool pass = residual <= cfg.tol.eigen_residual;

    ordered_json j;
    j["provenance"] = provenance(cfg);
    j["matrix"] = {{"diag", matrix.diag}, {"upper", matrix.upper}, {"lower", matrix.lower}};
    j["eigenvalues"] = spectral.eigenvalues;
    ordered_json vecs = ordered_json::array();
    for (const auto& v : spectral.eigenvectors) {
        vecs.push_back(std::vector<double>(v.coeffs().begin(), v.coeffs().end()));
    }
    j["eigenvectors"] = vecs;
    j["eigen_residual"] = residual;
    j["min_eigenvalue_gap"] = std::isfinite(gap) ? ordered_json(gap) : ordered_json(nullptr);
    j["pass"] = pass;
    write_json(dir / "spectrum.json", j);
    return pass ? 0 : 1;
}

int cmd_wave(const RunConfig& cfg, const CommandOptions& opts) {
    const fs::path dir = resolve_out_dir(cfg, opts);
    const SpectralData spectral = solve_spectrum(cfg);
    const std::vector<double> grid = command_grid(cfg);
    for (double t : cfg.wave_times) {
        const WaveField field =
            psi_closed_form(cfg.params, cfg.pump, spectral, cfg.superposition, grid, t);
        write_wavefield_csv(dir / ("wave_t" + format_double(t) + ".csv"), field, cfg);
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg, const CommandOptions& opts) {
    const fs::path dir = resolve_out_dir(cfg, opts);
    const SpectralData spectral = solve_spectrum(cfg);

    FieldSampler sampler = [&](std::span<const double> grid, double t) {
        return psi_closed_form(cfg.params, cfg.pump, spectral, cfg.superposition, grid, t);
    };

    // --- residual refinement ladder (coarsest level first) ---
    const double scale = std::pow(2.0, cfg.verify_levels - 1);
    const std::vector<ResidualReport> ladder =
        residual_ladder(sampler, cfg.params, cfg.pump, cfg.verify_x_lo, cfg.verify_x_hi,
                        cfg.verify_dx * scale, cfg.verify_dtau * scale, cfg.verify_levels,
                        cfg.verify_t, opts.mutation, opts.jobs);
    const ResidualReport& finest = ladder.back();
    const SlopeFit fit = residual_slope(ladder, cfg.tol.residual_floor);
    double plateau_min = ladder.front().max_rel_residual;
    for (const auto& r : ladder) plateau_min = std::min(plateau_min, r.max_rel_residual);

    {
        std::ofstream csv(dir / "residual_ladder.csv");
        if (!csv) throw config_error("cannot write residual_ladder.csv");
        csv << "dx,dtau,residual\n";
        for (const auto& r : ladder)
            csv << format_double(r.dx) << "," << format_double(r.dtau) << ","
                << format_double(r.max_rel_residual) << "\n";
    }

    const bool mutated = opts.mutation != PotentialMutation::none;
    const bool slope_ok = fit.levels_used >= 3 && fit.slope >= cfg.tol.slope_min;
    const bool residual_pass =
        !mutated && finest.max_rel_residual <= cfg.tol.residual_max && slope_ok;

    ordered_json j;
    j["provenance"] = provenance(cfg);
    ordered_json jladder = ordered_json::array();
    for (const auto& r : ladder)
        jladder.push_back({{"dx", r.dx},
                           {"dtau", r.dtau},
                           {"max_rel_residual", r.max_rel_residual},
                           {"stencil_order", r.stencil_order},
                           {"interior_points", r.interior_points}});
    j["residual"] = {{"mutation", to_string(opts.mutation)},
                     {"ladder", jladder},
                     {"finest_residual", finest.max_rel_residual},
                     {"slope", std::isnan(fit.slope) ? ordered_json(nullptr) : ordered_json(fit.slope)},
                     {"levels_in_fit", fit.levels_used},
                     {"plateau_min", plateau_min},
                     {"pass", residual_pass}};
    if (mutated) j["residual"]["plateau_detected"] = plateau_min >= cfg.tol.mutation_plateau;

    // --- conservation and orthogonality (skipped under mutation) ---
    bool conservation_pass = true;
    if (!mutated) {
        const std::vector<double> grid = command_grid(cfg);
        auto norm_drift = [&](const SuperpositionSpec& spec) {
            const double n0 =
                norm(psi_closed_form(cfg.params, cfg.pump, spectral, spec, grid, 0.0));
            double worst = 0.0;
            for (int i = 1; i <= 10; ++i) {
                const double t = cfg.horizon * i / 10.0;
                const double nt =
                    norm(psi_closed_form(cfg.params, cfg.pump, spectral, spec, grid, t));
                worst = std::max(worst, std::abs(nt / n0 - 1.0));
            }
            return worst;
        };

        double single_worst = 0.0;
        for (int mode = 0; mode <= cfg.params.n; ++mode)
            single_worst = std::max(single_worst, norm_drift(SuperpositionSpec::single(mode)));
        const double super_drift = norm_drift(cfg.superposition);

        // tail of the quadrature domain must carry no mass
        const WaveField probe =
            psi_closed_form(cfg.params, cfg.pump, spectral, cfg.superposition, grid, cfg.verify_t);
        const double total = norm(probe);
        const double tail_start = cfg.x_min + 0.9 * (cfg.x_max - cfg.x_min);
        double tail = 0.0;
        {
            std::vector<double> tail_grid;
            std::vector<std::complex<double>> tail_vals;
            for (std::size_t i = 0; i < probe.grid.size(); ++i) {
                if (probe.grid[i] >= tail_start) {
                    tail_grid.push_back(probe.grid[i]);
                    tail_vals.push_back(probe.values[i]);
                }
            }
            if (tail_grid.size() >= 2) {
                WaveField tf{tail_grid, tail_vals, probe.time};
                tail = norm(tf) / total;
            }
        }

        // continuous orthogonality of the gauged eigenfunctions
        const std::vector<double> ygrid =
            uniform_grid(cfg.params.k == 0.0 ? 0.0 : cfg.x_min, cfg.x_max, cfg.grid_points);
        const double cont_offdiag =
            max_offdiagonal(orthogonality_matrix(cfg.params, spectral, ygrid));

        // discrete orthogonality of the D-weighted coefficient vectors
        const TridiagonalMatrix matrix = build_h0_matrix(cfg.params);
        const SymmetrizedTridiagonal sym = symmetrize(matrix);
        double disc_offdiag = 0.0;
        {
            const int dim = matrix.dim();
            std::vector<std::vector<double>> w(static_cast<std::size_t>(dim),
                                               std::vector<double>(static_cast<std::size_t>(dim)));
            for (int i = 0; i < dim; ++i) {
                double nrm = 0.0;
                for (int m = 0; m < dim; ++m) {
                    w[i][m] = spectral.eigenvectors[i][m] / sym.scale[m];
                    nrm += w[i][m] * w[i][m];
                }
                nrm = std::sqrt(nrm);
                for (int m = 0; m < dim; ++m) w[i][m] /= nrm;
            }
            for (int i = 0; i < dim; ++i)
                for (int jdx = i + 1; jdx < dim; ++jdx) {
                    double dot = 0.0;
                    for (int m = 0; m < dim; ++m) dot += w[i][m] * w[jdx][m];
                    disc_offdiag = std::max(disc_offdiag, std::abs(dot));
                }
        }

        const bool drift_ok =
            single_worst <= cfg.tol.norm_drift && super_drift <= cfg.tol.norm_drift;
        const bool tail_ok = tail < 1e-12;
        const bool gram_ok = cont_offdiag <= cfg.tol.gram_offdiag &&
                             disc_offdiag <= cfg.tol.discrete_gram_offdiag;
        conservation_pass = drift_ok && tail_ok && gram_ok;

        j["conservation"] = {{"single_mode_drift_max", single_worst},
                             {"superposition_drift_max", super_drift},
                             {"tail_fraction", tail},
                             {"pass", drift_ok && tail_ok}};
        j["orthogonality"] = {{"continuous_offdiag_max", cont_offdiag},
                              {"discrete_offdiag_max", disc_offdiag},
                              {"pass", gram_ok}};
    }

    const bool pass = residual_pass && conservation_pass;
    j["pass"] = pass;
    write_json(dir / "conservation.json", j);
    return pass ? 0 : 1;
}

int cmd_propagate(const RunConfig& cfg, const CommandOptions& opts) {
    const fs::path dir = resolve_out_dir(cfg, opts);

    PropagationConfig pcfg;
    pcfg.x_min = cfg.x_min;
    pcfg.x_max = cfg.x_max;
    pcfg.points = cfg.grid_points;
    pcfg.t0 = cfg.prop_t0;
    pcfg.t1 = cfg.prop_t1;
    pcfg.steps = cfg.prop_steps;
    pcfg.boundary = (cfg.params.k == 0.0 && cfg.x_min == 0.0)
                        ? BoundaryMode::even_reflect_at_zero
                        : BoundaryMode::dirichlet_both;

    const std::vector<double> grid = pcfg.make_grid();
    const int interval = std::max(1, cfg.prop_steps / cfg.prop_checkpoints);

    ordered_json checkpoints = ordered_json::array();
    bool pass = true;
    ordered_json j;
    j["provenance"] = provenance(cfg);
    j["boundary"] = to_string(pcfg.boundary);

    if (cfg.prop_smoke) {
        // free propagation of a Gaussian: exercises the stepper alone
        WaveField initial;
        initial.grid = grid;
        initial.time = pcfg.t0;
        const double center = 0.5 * (pcfg.x_min + pcfg.x_max);
        const double width = (pcfg.x_max - pcfg.x_min) / 20.0;
        initial.values.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double z = (grid[i] - center) / width;
            initial.values[i] = std::exp(-0.5 * z * z);
        }
        const double n0 = discrete_norm(initial);
        double drift = 0.0;
        int written = 0;
        auto observer = [&](int step, const WaveField& f) {
            if (step % interval != 0 && step != cfg.prop_steps) return;
            const double ratio = discrete_norm(f) / n0;
            drift = std::max(drift, std::abs(ratio - 1.0));
            checkpoints.push_back({{"t", f.time}, {"norm_ratio", ratio}});
            write_wavefield_csv(dir / ("checkpoint_" + std::to_string(++written) + ".csv"), f,
                                cfg);
        };
        pcfg.boundary = BoundaryMode::dirichlet_both;
        propagate_potential(initial, [](double, double) { return 0.0; }, pcfg, observer);
        pass = drift <= cfg.tol.smoke_norm_drift;
        j["mode"] = "smoke";
        j["boundary"] = to_string(pcfg.boundary);
        j["checkpoints"] = checkpoints;
        j["norm_drift"] = drift;
        j["pass"] = pass;
        write_json(dir / "fidelity.json", j);
        return pass ? 0 : 1;
    }

    const SpectralData spectral = solve_spectrum(cfg);
    const WaveField initial =
        psi_closed_form(cfg.params, cfg.pump, spectral, cfg.superposition, grid, pcfg.t0);
    const double n0 = discrete_norm(initial);

    double drift = 0.0;
    int written = 0;
    auto observer = [&](int step, const WaveField& f) {
        if (step % interval != 0 && step != cfg.prop_steps) return;
        const double ratio = discrete_norm(f) / n0;
        drift = std::max(drift, std::abs(ratio - 1.0));
        const WaveField exact =
            psi_closed_form(cfg.params, cfg.pump, spectral, cfg.superposition, grid, f.time);
        checkpoints.push_back(
            {{"t", f.time}, {"fidelity", fidelity(f, exact)}, {"norm_ratio", ratio}});
        write_wavefield_csv(dir / ("checkpoint_" + std::to_string(++written) + ".csv"), f, cfg);
    };

    const WaveField final_field = propagate(initial, cfg.params, cfg.pump, pcfg, observer);
    const WaveField exact_final =
        psi_closed_form(cfg.params, cfg.pump, spectral, cfg.superposition, grid, pcfg.t1);
    const double final_fidelity = fidelity(final_field, exact_final);

    pass = final_fidelity >= cfg.tol.fidelity_min && drift <= cfg.tol.cn_norm_drift;
    j["mode"] = "family";
    j["checkpoints"] = checkpoints;
    j["final_fidelity"] = final_fidelity;
    j["norm_drift"] = drift;
    j["pass"] = pass;
    write_json(dir / "fidelity.json", j);
    return pass ? 0 : 1;
}

int run_subcommand(const std::string& name, const std::string& config_path,
                   const CommandOptions& opts) {
    try {
        const RunConfig cfg = parse_config_file(config_path);
        if (opts.mutation != PotentialMutation::none && name != "verify")
            throw config_error("--mutate is only valid for the verify subcommand");
        if (name == "spectrum") return cmd_spectrum(cfg, opts);
        if (name == "wave") return cmd_wave(cfg, opts);
        if (name == "verify") return cmd_verify(cfg, opts);
        if (name == "propagate") return cmd_propagate(cfg, opts);
        throw config_error("unknown subcommand '" + name + "'");
    } catch (const config_error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::domain_error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "numeric failure: " << err.what() << "\n";
        return 3;
    }
}

}  // namespace qes
