#pragma once

#include <stdexcept>
#include <string>

namespace grinprop {

// Bad physical or numerical parameters supplied by the caller / config.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical guard tripped: quadrature window too narrow, completeness
// deficit, trace/PSD violation. Distinct from ConfigError so the CLI can
// map it to its own exit code.
class NumericalGuardError : public std::runtime_error {
public:
    explicit NumericalGuardError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace grinprop
