#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cqnls {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: malformed grid, config key, parameter out of range.
class ConfigError : public Error {
public:
    using Error::Error;
};

class InvalidGrid : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// Any numerical failure inside a solver.
class SolverError : public Error {
public:
    using Error::Error;
};

class NoConvergence : public SolverError {
public:
    NoConvergence(const std::string& what, double final_residual, int iterations)
        : SolverError(what), final_residual_(final_residual), iterations_(iterations) {}

    double final_residual() const noexcept { return final_residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double final_residual_;
    int iterations_;
};

// Fixed-point loop of a CNFD step failed to settle.
class StepFailure : public SolverError {
public:
    StepFailure(const std::string& what, std::vector<double> history, long step_index = -1)
        : SolverError(what), history_(std::move(history)), step_index_(step_index) {}

    // Relative increments ||U^{l+1}-U^l|| / ||U^{l+1}|| per fixed-point iteration.
    const std::vector<double>& history() const noexcept { return history_; }
    long step_index() const noexcept { return step_index_; }

private:
    std::vector<double> history_;
    long step_index_;
};

class NoGroundState : public SolverError {
public:
    using SolverError::SolverError;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace cqnls
