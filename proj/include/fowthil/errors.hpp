#pragma once

#include <stdexcept>
#include <string>

namespace fowthil {

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class CalibrationInfeasible : public std::runtime_error {
public:
    CalibrationInfeasible(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class IdentificationInfeasible : public std::runtime_error {
public:
    IdentificationInfeasible(const std::string& what, double condition_number)
        : std::runtime_error(what), condition_number_(condition_number) {}
    double condition_number() const noexcept { return condition_number_; }

private:
    double condition_number_;
};

class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, double time, int turbine = -1)
        : std::runtime_error(what), time_(time), turbine_(turbine) {}
    double time() const noexcept { return time_; }
    int turbine() const noexcept { return turbine_; }

private:
    double time_;
    int turbine_;
};

class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fowthil
