#pragma once

#include <stdexcept>
#include <string>

namespace fieldrecon {

/// Invalid sizes, parameters, or shapes supplied by the caller.
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent input data (files, trajectories).
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure at run time (instability, divergence).
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fieldrecon
