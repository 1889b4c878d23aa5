#pragma once

#include <stdexcept>
#include <string>

namespace cuspforge {

// Error taxonomy, mirrored by the CLI exit codes: validation/hypothesis
// failures exit 1, numeric failures exit 2.

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// A stated hypothesis does not hold for the requested inputs.
struct hypothesis_error : std::invalid_argument {
    explicit hypothesis_error(const std::string& what) : std::invalid_argument(what) {}
};

// A solver or quadrature failed to reach its target tolerance.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cuspforge
