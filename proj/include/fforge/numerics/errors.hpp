#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fforge {

// Root of every library failure. kind() is the stable machine-readable tag
// the CLI puts into its error JSON.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept = 0;
};

class ConfigError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "ConfigError"; }
};

class ShapeError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "ShapeError"; }
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what, int index = -1)
        : Error(what), index_(index) {}
    const char* kind() const noexcept override { return "NumericalError"; }
    // Offending coordinate (or -1 if not attributable).
    int index() const noexcept { return index_; }

private:
    int index_;
};

class NotSPD : public NumericalError {
public:
    // t and curve locate the tensor inside a solver (-1 when not applicable).
    NotSPD(int pivot, double value, int t = -1, int curve = -1)
        : NumericalError("matrix is not SPD: pivot " + std::to_string(pivot) + " = " +
                             std::to_string(value) + location(t, curve),
                         pivot),
          pivot_(pivot), value_(value), t_(t), curve_(curve) {}
    const char* kind() const noexcept override { return "NotSPD"; }
    int pivot() const noexcept { return pivot_; }
    double value() const noexcept { return value_; }
    int t() const noexcept { return t_; }
    int curve() const noexcept { return curve_; }

private:
    static std::string location(int t, int curve) {
        std::string s;
        if (t >= 0) s += " at t = " + std::to_string(t);
        if (curve >= 0) s += " on curve " + std::to_string(curve);
        return s;
    }

    int pivot_;
    double value_;
    int t_;
    int curve_;
};

// A point left the chart. t is the grid index, curve the data index
// (-1 when not applicable).
class DomainError : public NumericalError {
public:
    DomainError(const std::string& what, int t = -1, int curve = -1)
        : NumericalError(what, t), t_(t), curve_(curve) {}
    const char* kind() const noexcept override { return "DomainError"; }
    int t() const noexcept { return t_; }
    int curve() const noexcept { return curve_; }

private:
    int t_;
    int curve_;
};

class IllPosedRanders : public NumericalError {
public:
    IllPosedRanders(double wind_norm, double v0)
        : NumericalError("wind too strong: |f|_g = " + std::to_string(wind_norm) +
                         " >= v0 = " + std::to_string(v0)),
          wind_norm_(wind_norm), v0_(v0) {}
    const char* kind() const noexcept override { return "IllPosedRanders"; }
    double wind_norm() const noexcept { return wind_norm_; }
    double v0() const noexcept { return v0_; }

private:
    double wind_norm_;
    double v0_;
};

class StalledLineSearch : public NumericalError {
public:
    explicit StalledLineSearch(int halvings)
        : NumericalError("line search stalled after " + std::to_string(halvings) +
                         " halvings") {}
    const char* kind() const noexcept override { return "StalledLineSearch"; }
};

class IntegrationError : public NumericalError {
public:
    IntegrationError(const std::string& what, double exit_time)
        : NumericalError(what + " (t = " + std::to_string(exit_time) + ")"),
          exit_time_(exit_time) {}
    const char* kind() const noexcept override { return "IntegrationError"; }
    double exit_time() const noexcept { return exit_time_; }

private:
    double exit_time_;
};

class Diverged : public NumericalError {
public:
    Diverged(int iteration, std::vector<double> snapshot)
        : NumericalError("optimizer diverged at iteration " + std::to_string(iteration)),
          iteration_(iteration), snapshot_(std::move(snapshot)) {}
    const char* kind() const noexcept override { return "Diverged"; }
    int iteration() const noexcept { return iteration_; }
    // Iterate at the moment of divergence; layout is the caller's.
    const std::vector<double>& snapshot() const noexcept { return snapshot_; }

private:
    int iteration_;
    std::vector<double> snapshot_;
};

}  // namespace fforge
