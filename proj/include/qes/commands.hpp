#ifndef QES_COMMANDS_HPP
#define QES_COMMANDS_HPP

#include <string>

#include "qes/config.hpp"
#include "qes/model.hpp"

namespace qes {

struct CommandOptions {
    std::string out_dir;  // empty: use config output.dir
    int jobs = 1;
    PotentialMutation mutation = PotentialMutation::none;  // verify only
};

/// Exit codes shared by the library entry points and the CLI:
/// 0 pass, 1 tolerance failure, 2 config error, 3 numeric failure.
int cmd_spectrum(const RunConfig& cfg, const CommandOptions& opts = {});
int cmd_wave(const RunConfig& cfg, const CommandOptions& opts = {});
int cmd_verify(const RunConfig& cfg, const CommandOptions& opts = {});
int cmd_propagate(const RunConfig& cfg, const CommandOptions& opts = {});

/// Parse the config, run one subcommand by name, map exceptions to exit
/// codes (config/domain -> 2, numeric/internal -> 3). Messages go to stderr.
int run_subcommand(const std::string& name, const std::string& config_path,
                   const CommandOptions& opts);

}  // namespace qes

#endif
