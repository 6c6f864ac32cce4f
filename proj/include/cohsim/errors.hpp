#pragma once

#include <stdexcept>
#include <string>

namespace cohsim {

// Malformed element chain or inconsistent tag stream.
class StructureError : public std::runtime_error {
public:
    explicit StructureError(const std::string& msg) : std::runtime_error(msg) {}
};

// Configuration / parse problems (CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem problems (CLI exit code 2).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cohsim
