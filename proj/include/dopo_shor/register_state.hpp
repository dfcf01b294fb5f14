#pragma once

// Exact algebraic mirror of the pulse network: the control/work register
// pair as a uniformly weighted list of (x, w) terms.

#include <cstdint>
#include <optional>
#include <vector>

namespace dopo::registers {

using u64 = std::uint64_t;

inline constexpr unsigned kMaxControlBits = 26;

struct RegisterConfig {
    u64 modulus;     // N
    u64 base;        // a
    unsigned n;      // control bits
    unsigned m;      // work bits, ceil(log2 N)

    /// Defaults n to 2*ceil(log2 N). Throws DomainError for an unusable N
    /// (even, < 3, >= 2^63), a outside [1, N), or n outside [1, 26].
    static RegisterConfig make(u64 modulus, u64 base, std::optional<unsigned> n = std::nullopt);

    [[nodiscard]] u64 control_size() const noexcept { return u64{1} << n; }
    [[nodiscard]] u64 work_size() const noexcept { return u64{1} << m; }
};

struct Term {
    u64 x;  // control value
    u64 w;  // work value

    friend bool operator==(const Term&, const Term&) = default;
};

/// Uniform superposition-like list of terms; amplitude 1/sqrt(size()).
class ClassicalState {
public:
    /// Validates: non-empty, distinct x < 2^n, w < 2^m.
    ClassicalState(unsigned n, unsigned m, std::vector<Term> terms);

    [[nodiscard]] unsigned control_bits() const noexcept { return n_; }
    [[nodiscard]] unsigned work_bits() const noexcept { return m_; }
    [[nodiscard]] const std::vector<Term>& terms() const noexcept { return terms_; }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
    [[nodiscard]] double amplitude() const noexcept;
    [[nodiscard]] std::vector<u64> control_values() const;

private:
    unsigned n_;
    unsigned m_;
    std::vector<Term> terms_;
};

/// {(j, 0) : 0 <= j < 2^n}
[[nodiscard]] ClassicalState initial_state(const RegisterConfig& cfg);

/// (j, 0) -> (j, a^j mod N - 1). Throws NotCoprimeError for gcd(a, N) > 1.
[[nodiscard]] ClassicalState apply_mef(const ClassicalState& state, const RegisterConfig& cfg);

/// 1 / sum(lambda_i^2) with lambda_i the fraction of terms carrying work value i.
[[nodiscard]] double schmidt_number(const ClassicalState& state);

/// Keeps the terms with w == target. Throws NoSurvivorsError if none remain.
[[nodiscard]] ClassicalState project_work(const ClassicalState& state, u64 target);

/// MSB-first bits of `value` in `width` bits; index 0 is the most significant.
[[nodiscard]] std::vector<bool> to_bits_msb(u64 value, unsigned width);
[[nodiscard]] u64 from_bits_msb(const std::vector<bool>& bits);

}  // namespace dopo::registers
