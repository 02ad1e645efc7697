// errors.hpp — Error categories shared across the library and the CLI exit codes

#pragma once

#include <stdexcept>
#include <string>

namespace uddmag {

// Parameter combinations outside the regime a formula is asserted for
// (fast/slow fluctuation limits, failed exponential fits).
struct regime_error : std::runtime_error {
    explicit regime_error(const std::string& what) : std::runtime_error(what) {}
};

// Requests that would exceed configured resource limits (recursion caps,
// dense-sampler sizes).
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Discretization too coarse for the requested process. A validation error;
// kept distinct so callers can suggest a finer step.
struct resolution_error : std::invalid_argument {
    explicit resolution_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace uddmag
