#pragma once

#include <stdexcept>
#include <string>

namespace seirim {

// Base for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad inputs: parameters out of range, malformed config, broken preconditions.
// The CLI maps these to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Runtime numeric failures: singular incidence, solver stiffness, positivity
// violations, degenerate parameters, eigensolver trouble. Exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace seirim
