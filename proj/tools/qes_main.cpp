#include <string>

#include <CLI11.hpp>

#include "qes/commands.hpp"
#include "qes/model.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Algebraic spectra and exact time-dependent solutions of the "
                 "driven sextic oscillator family, with numerical verification oracles"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string mutate = "none";
    int jobs = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--jobs", jobs, "parallel refinement-ladder workers")
            ->check(CLI::PositiveNumber);
    };

    add_common(app.add_subcommand("spectrum", "algebraic eigenvalues and eigenvectors"));
    add_common(app.add_subcommand("wave", "closed-form wavefunction CSVs at requested times"));
    CLI::App* verify =
        app.add_subcommand("verify", "PDE residual ladder and conservation checks");
    add_common(verify);
    verify->add_option("--mutate", mutate, "potential mutation (negative control)");
    add_common(app.add_subcommand("propagate", "Crank-Nicolson evolution against the closed form"));

    CLI11_PARSE(app, argc, argv);

    qes::CommandOptions opts;
    opts.out_dir = out_dir;
    opts.jobs = jobs;
    try {
        opts.mutation = qes::potential_mutation_from_name(mutate);
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }

    return qes::run_subcommand(app.get_subcommands().front()->get_name(), config_path, opts);
}
