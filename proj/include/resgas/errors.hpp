#pragma once

#include <stdexcept>
#include <string>

namespace resgas {

// Exit codes used by the CLI.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitData = 3,
    kExitNumerical = 4,
};

// Bad flags, malformed config files, unknown keys.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid dataset parameters, corrupt caches/snapshots, I/O failures.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Singular solves, degenerate random draws, divergent generators.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace resgas
