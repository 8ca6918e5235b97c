#pragma once

#include <stdexcept>
#include <string>

namespace clipcard {

/// Input failed a precondition or invariant check.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Attempt to create something that already exists (e.g. re-enrolling a label).
class ConflictError : public std::runtime_error {
public:
    explicit ConflictError(const std::string& what) : std::runtime_error(what) {}
};

/// A configuration document is structurally valid but unusable.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace clipcard
