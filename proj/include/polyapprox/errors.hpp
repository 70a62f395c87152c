#pragma once

#include <stdexcept>
#include <string>

namespace polyapprox {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input data (bad chain code, broken geometry file,
// raster with zero or several foreground components).
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

// Structurally valid input that the requested operation cannot work on
// (too few points, open curve where a closed one is required).
class DegenerateGeometry : public Error {
public:
    explicit DegenerateGeometry(const std::string& msg) : Error(msg) {}
};

// Caller asked for something the API refuses without an explicit override.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& msg) : Error(msg) {}
};

} // namespace polyapprox
