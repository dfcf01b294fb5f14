#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dopo {

/// Input outside an operation's domain (bad modulus, operand >= N, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// gcd(a, N) > 1. Carries the shared factor so callers can report it.
class NotCoprimeError : public DomainError {
public:
    NotCoprimeError(std::uint64_t base, std::uint64_t modulus, std::uint64_t factor);

    [[nodiscard]] std::uint64_t base() const noexcept { return base_; }
    [[nodiscard]] std::uint64_t modulus() const noexcept { return modulus_; }
    [[nodiscard]] std::uint64_t factor() const noexcept { return factor_; }

private:
    std::uint64_t base_;
    std::uint64_t modulus_;
    std::uint64_t factor_;
};

/// Projection onto a work value left no terms.
class NoSurvivorsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// |c| below the homodyne threshold; the sign cannot be trusted.
class AmbiguousReadoutError : public std::runtime_error {
public:
    AmbiguousReadoutError(std::size_t slot, double amplitude);

    [[nodiscard]] std::size_t slot() const noexcept { return slot_; }

private:
    std::size_t slot_;
};

class UnclassifiableFrameError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegradedFrameError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Group 0 (x = 0) did not come out intact, so there is no decode reference.
class DecodeAnchorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Only x = 0 survived: the order is not representable in the control register.
class OrderOutOfRangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two independent computations disagree. Always a bug, never bad input.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace dopo
