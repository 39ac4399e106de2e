#pragma once

#include <stdexcept>
#include <string>

namespace ericksen {

/// A state left the admissible range (potential barrier, unit-norm director).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure broke down (ODE stall, director collapse, line search failure).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration. `key_path` names the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key_path, const std::string& what)
        : std::runtime_error(key_path.empty() ? what : key_path + ": " + what),
          key_path_(std::move(key_path)) {}

    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

}  // namespace ericksen
