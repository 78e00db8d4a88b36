#pragma once

#include <stdexcept>
#include <string>

namespace countdown {

/// Parameter outside the domain where a formula is defined (e.g. x not in (0,1)).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A computation would exceed a configured size cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An exhaustive computation needs more work units than its cap allows.
class BudgetError : public ResourceError {
public:
    BudgetError(const std::string& what, double required, double cap)
        : ResourceError(what + " (needs " + std::to_string(required) + ", cap " + std::to_string(cap) + ")"),
          required_(required), cap_(cap) {}

    double required() const { return required_; }
    double cap() const { return cap_; }

private:
    double required_;
    double cap_;
};

/// Input path violates the countdown step constraints.
class MalformedTrajectory : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A pmf handed to a routine that needs unimodality failed the certificate.
class NotUnimodal : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw DomainError(what);
}

} // namespace countdown
