#ifndef QES_ERRORS_HPP
#define QES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qes {

/// Configuration or input-shape problem: bad config value, malformed file,
/// grid that cannot support the requested stencil. Maps to CLI exit code 2.
class config_error : public std::invalid_argument {
public:
    explicit config_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Numeric failure at runtime (e.g. eigensolver non-convergence).
/// Maps to CLI exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qes

#endif
