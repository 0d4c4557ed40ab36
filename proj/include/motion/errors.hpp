#pragma once

#include <stdexcept>
#include <string>

namespace motion {

// Every library failure derives from Error so the CLI can map it to an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration (bad schema, tau list length, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Valid syntax but impossible in the modeled world: trajectory leaves the
// field, boundary cell centers, bad device conductances, unsorted streams.
class DomainError : public Error {
public:
    using Error::Error;
};

// Non-finite membrane state, negative clock steps and similar faults.
class NumericFault : public Error {
public:
    using Error::Error;
};

// A score or calibration that has no defined value for the given data.
class UndefinedResult : public Error {
public:
    using Error::Error;
};

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_config = 2,
    exit_domain = 3,
    exit_numeric = 4,
};

} // namespace motion
