#pragma once

#include <stdexcept>
#include <string>

namespace cvbft {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// M/M/1 configuration with utilization >= 1.
class UnstableQueueError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Samples have zero spread where a positive variance is required.
class DegenerateVarianceError : public Error {
public:
    using Error::Error;
};

/// Sample variance too large for a beta distribution with the sample mean.
class MomentInfeasibleError : public Error {
public:
    using Error::Error;
};

/// Baseline feasibility conditioning cannot be satisfied numerically.
class ScenarioDegenerateError : public Error {
public:
    using Error::Error;
};

}  // namespace cvbft
