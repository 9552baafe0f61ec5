#pragma once

#include <stdexcept>
#include <string>

namespace dxnn {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid experiment, seed or scenario configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Population file could not be read or written.
class PersistenceError : public Error {
public:
    using Error::Error;
};

// Genotype could not be turned into an executable network.
class CompileError : public Error {
public:
    using Error::Error;
};

// Bad input to a running network (wrong sensor vector lengths, ...).
class RuntimeError : public Error {
public:
    using Error::Error;
};

// Cart-pole integration produced a non-finite state.
class PhysicsError : public Error {
public:
    using Error::Error;
};

// A fitness evaluator threw; carries the id of the genotype under evaluation.
class EvaluationError : public Error {
public:
    using Error::Error;
};

} // namespace dxnn
