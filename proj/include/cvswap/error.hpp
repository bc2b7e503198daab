#pragma once

#include <stdexcept>
#include <string>

namespace cvswap {

/// Structural misuse of a model: unknown or duplicate mode labels, forms that
/// reference sources the model does not own.
class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A parameter outside its physical domain (negative squeezing, efficiency
/// above one, a gain that needs a nonexistent feedforward port, ...).
class PhysicsError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed or inconsistent configuration document.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string message, std::string key = {}, int line = 0)
        : std::runtime_error(std::move(message)), key_(std::move(key)), line_(line) {}

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

}  // namespace cvswap
