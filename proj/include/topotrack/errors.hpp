#pragma once

#include <stdexcept>
#include <string>

namespace topotrack {

// Error taxonomy mirrored by the CLI exit codes:
//   ConfigError    -> 2 (bad configuration or parameters)
//   InputError     -> 3 (missing/unreadable/malformed input data)
//   InvariantError -> 4 (internal invariant violated; indicates a bug)
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvariantError : std::runtime_error {
    explicit InvariantError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace topotrack
