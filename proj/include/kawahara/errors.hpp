#pragma once

#include <stdexcept>
#include <string>

namespace kawahara {

/// A physical or numerical parameter violates a documented precondition.
class InvalidParameters : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data has the wrong shape or lives on an incompatible lattice.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A solver state stopped being finite.
class BlowupDetected : public std::runtime_error {
public:
    explicit BlowupDetected(double time)
        : std::runtime_error("non-finite state detected at t = " + std::to_string(time)),
          time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace kawahara
