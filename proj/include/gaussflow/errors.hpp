#pragma once

#include <stdexcept>
#include <string>

namespace gaussflow {

// Base class for all recoverable solver errors.
struct FlowError : std::runtime_error {
    explicit FlowError(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInput : FlowError {
    explicit InvalidInput(const std::string& what) : FlowError(what) {}
};

struct GridTooSmall : FlowError {
    explicit GridTooSmall(const std::string& what) : FlowError(what) {}
};

// Induced metric of a pseudo-Euclidean state stopped being positive definite.
struct NotSpaceLike : FlowError {
    explicit NotSpaceLike(const std::string& what) : FlowError(what) {}
};

struct DegenerateFrame : FlowError {
    explicit DegenerateFrame(const std::string& what) : FlowError(what) {}
};

// Gauss-ball radius too large for the weighted-estimate machinery.
struct InfeasibleRadius : FlowError {
    explicit InfeasibleRadius(const std::string& what) : FlowError(what) {}
};

struct CflCollapse : FlowError {
    explicit CflCollapse(const std::string& what) : FlowError(what) {}
};

struct InvalidTime : FlowError {
    explicit InvalidTime(const std::string& what) : FlowError(what) {}
};

struct ConfigError : FlowError {
    explicit ConfigError(const std::string& what) : FlowError(what) {}
};

}  // namespace gaussflow
