#pragma once

#include <stdexcept>
#include <string>

namespace triage {

// Bad invocation: unknown flag, missing required argument, contradictory options.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input data: unreadable file, schema violation,
// reference to an unknown entity.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace triage
