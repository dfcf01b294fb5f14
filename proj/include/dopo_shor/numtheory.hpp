#pragma once

// Division-free modular arithmetic: Montgomery REDC with R = 2^k, residue
// conversion and MSB-first binary exponentiation. All moduli are below 2^63
// so every intermediate product fits an unsigned 128-bit word.

#include <cstdint>

namespace dopo::numtheory {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 kMaxModulus = u64{1} << 63;

/// Greatest common divisor. Throws DomainError when both arguments are zero.
[[nodiscard]] u64 gcd(u64 a, u64 b);

struct ExtGcd {
    u64 g;
    std::int64_t s;
    std::int64_t t;
};

/// Extended Euclid: a*s + b*t = g. Both arguments must lie in (0, 2^63].
[[nodiscard]] ExtGcd ext_gcd(u64 a, u64 b);

/// Montgomery context for an odd modulus N with R the smallest power of two
/// above N. Satisfies R*Rinv - N*Nprime = 1 exactly.
class MontCtx {
public:
    /// Throws DomainError unless N is odd and 3 <= N < 2^63.
    explicit MontCtx(u64 modulus);

    [[nodiscard]] u64 modulus() const noexcept { return n_; }
    [[nodiscard]] u64 r() const noexcept { return r_; }
    [[nodiscard]] unsigned log2_r() const noexcept { return log2_r_; }
    [[nodiscard]] u64 r_inv() const noexcept { return r_inv_; }
    [[nodiscard]] u64 n_prime() const noexcept { return n_prime_; }
    /// R^2 mod N, used to enter the residue system.
    [[nodiscard]] u64 r_squared() const noexcept { return r2_; }

    /// t * R^-1 mod N for t < N*R. Shifts, masks and one conditional subtract.
    [[nodiscard]] u64 redc(u128 t) const noexcept {
        const u128 mask = (u128{1} << log2_r_) - 1;
        const u128 m = ((t & mask) * n_prime_) & mask;
        u128 reduced = (t + m * n_) >> log2_r_;
        if (reduced >= n_) reduced -= n_;
        return static_cast<u64>(reduced);
    }

    friend bool operator==(const MontCtx&, const MontCtx&) = default;

private:
    u64 n_;
    u64 r_;
    unsigned log2_r_;
    u64 r_inv_;
    u64 n_prime_;
    u64 r2_;
};

/// Same as MontCtx{N}; kept for call sites that read better as a function.
[[nodiscard]] MontCtx mont_setup(u64 modulus);

/// t1 * t2 * R^-1 mod N. Operands must be < N.
[[nodiscard]] u64 mont_mul(u64 t1, u64 t2, const MontCtx& ctx);

/// An element of the N-residue system, aR mod N.
struct Residue {
    u64 value;
    MontCtx ctx;
};

[[nodiscard]] Residue to_residue(u64 a, const MontCtx& ctx);
[[nodiscard]] u64 from_residue(const Residue& res);

/// a^x mod N, square-and-multiply over the bits of x (MSB first) entirely in
/// the residue system. Throws NotCoprimeError when gcd(a, N) > 1.
[[nodiscard]] u64 mod_exp(u64 a, u64 x, u64 modulus);
[[nodiscard]] u64 mod_exp(u64 a, u64 x, const MontCtx& ctx);

/// Smallest r >= 1 with a^r = 1 (mod N), by brute-force iteration. This is
/// the reference oracle; nothing on the optical path calls it for decoding.
[[nodiscard]] u64 multiplicative_order(u64 a, u64 modulus);

/// Plain a*b mod N through a 128-bit product.
[[nodiscard]] inline u64 mul_mod(u64 a, u64 b, u64 modulus) noexcept {
    return static_cast<u64>(u128{a} * b % modulus);
}

/// Deterministic Miller-Rabin, exact for every 64-bit input.
[[nodiscard]] bool is_prime(u64 n);

/// floor(n^(1/k)) for k >= 1, exact.
[[nodiscard]] u64 integer_root(u64 n, unsigned k);

/// True when n = b^k for some b >= 2, k >= 2.
[[nodiscard]] bool is_perfect_power(u64 n);

/// ceil(log2 n) for n >= 1.
[[nodiscard]] unsigned ceil_log2(u64 n) noexcept;

}  // namespace dopo::numtheory
