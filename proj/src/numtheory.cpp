#include "dopo_shor/numtheory.hpp"

#include "dopo_shor/errors.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <string>

namespace dopo {

NotCoprimeError::NotCoprimeError(std::uint64_t base, std::uint64_t modulus, std::uint64_t factor)
    : DomainError("gcd(" + std::to_string(base) + ", " + std::to_string(modulus) +
                  ") = " + std::to_string(factor)),
      base_(base),
      modulus_(modulus),
      factor_(factor) {}

AmbiguousReadoutError::AmbiguousReadoutError(std::size_t slot, double amplitude)
    : std::runtime_error("ambiguous homodyne readout at slot " + std::to_string(slot) +
                         " (c = " + std::to_string(amplitude) + ")"),
      slot_(slot) {}

}  // namespace dopo

namespace dopo::numtheory {

u64 gcd(u64 a, u64 b) {
    if (a == 0 && b == 0) throw DomainError("gcd(0, 0) is undefined");
    while (b != 0) {
        const u64 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

ExtGcd ext_gcd(u64 a, u64 b) {
    if (a == 0 || b == 0 || a > kMaxModulus || b > kMaxModulus)
        throw DomainError("ext_gcd arguments must lie in (0, 2^63]");

    // Invariant: r_i = a*s_i + b*t_i. Final |s| <= b/2g and |t| <= a/2g fit in
    // 64 bits; the wide type only covers the R = 2^63 operand itself.
    __int128 r0 = a, r1 = b;
    __int128 s0 = 1, s1 = 0;
    __int128 t0 = 0, t1 = 1;
    while (r1 != 0) {
        const __int128 q = r0 / r1;
        __int128 tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = s0 - q * s1;
        s0 = s1;
        s1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    return {static_cast<u64>(r0), static_cast<std::int64_t>(s0), static_cast<std::int64_t>(t0)};
}

MontCtx::MontCtx(u64 modulus) : n_(modulus) {
    if (modulus < 3 || modulus % 2 == 0 || modulus >= kMaxModulus)
        throw DomainError("Montgomery modulus must be odd and in [3, 2^63), got " +
                          std::to_string(modulus));
    log2_r_ = static_cast<unsigned>(std::bit_width(modulus));
    r_ = u64{1} << log2_r_;

    const ExtGcd eg = ext_gcd(r_, n_);
    // R*s + N*t = 1  =>  Rinv = s mod N, Nprime = -t mod R.
    const std::int64_t n_signed = static_cast<std::int64_t>(n_);
    std::int64_t s = eg.s % n_signed;
    if (s <= 0) s += n_signed;
    r_inv_ = static_cast<u64>(s);

    const __int128 r_wide = r_;
    __int128 np = -static_cast<__int128>(eg.t) % r_wide;
    if (np <= 0) np += r_wide;
    // Shifting s by k*N shifts t by k*R, so the normalized pair still certifies.
    if (r_wide * r_inv_ - static_cast<__int128>(n_) * np != 1)
        throw ConsistencyError("Montgomery certificate R*Rinv - N*Nprime != 1");
    n_prime_ = static_cast<u64>(np);

    r2_ = static_cast<u64>((u128{r_} % n_) * (u128{r_} % n_) % n_);
}

MontCtx mont_setup(u64 modulus) { return MontCtx{modulus}; }

u64 mont_mul(u64 t1, u64 t2, const MontCtx& ctx) {
    if (t1 >= ctx.modulus() || t2 >= ctx.modulus())
        throw DomainError("Montgomery operand must be below the modulus");
    return ctx.redc(u128{t1} * t2);
}

Residue to_residue(u64 a, const MontCtx& ctx) {
    if (a >= ctx.modulus()) throw DomainError("value must be below the modulus");
    return {mont_mul(a, ctx.r_squared(), ctx), ctx};
}

u64 from_residue(const Residue& res) {
    if (res.value >= res.ctx.modulus()) throw DomainError("residue out of range");
    return res.ctx.redc(res.value);
}

u64 mod_exp(u64 a, u64 x, const MontCtx& ctx) {
    const u64 n = ctx.modulus();
    if (a == 0 || a >= n) throw DomainError("base must satisfy 0 < a < N");
    if (const u64 g = gcd(a, n); g != 1) throw NotCoprimeError(a, n, g);

    const u64 base = ctx.redc(u128{a} * ctx.r_squared());
    u64 acc = ctx.redc(ctx.r_squared());  // 1 in residue form
    for (int bit = std::bit_width(x) - 1; bit >= 0; --bit) {
        acc = ctx.redc(u128{acc} * acc);
        if ((x >> bit) & 1U) acc = ctx.redc(u128{acc} * base);
    }
    return ctx.redc(acc);
}

u64 mod_exp(u64 a, u64 x, u64 modulus) { return mod_exp(a, x, MontCtx{modulus}); }

u64 multiplicative_order(u64 a, u64 modulus) {
    if (modulus < 2) throw DomainError("modulus must be at least 2");
    if (a == 0 || a >= modulus) throw DomainError("base must satisfy 0 < a < N");
    if (const u64 g = gcd(a, modulus); g != 1) throw NotCoprimeError(a, modulus, g);
    u64 r = 1;
    u64 value = a;
    while (value != 1) {
        value = mul_mod(value, a, modulus);
        ++r;
    }
    return r;
}

namespace {

u64 pow_mod_plain(u64 base, u64 exp, u64 modulus) {
    u64 result = 1 % modulus;
    base %= modulus;
    while (exp != 0) {
        if (exp & 1U) result = mul_mod(result, base, modulus);
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    return result;
}

bool miller_rabin_witness(u64 n, u64 d, unsigned s, u64 a) {
    u64 x = pow_mod_plain(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (unsigned i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

}  // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    constexpr std::array<u64, 12> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : kBases) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1U) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : kBases) {
        if (miller_rabin_witness(n, d, s, a)) return false;
    }
    return true;
}

namespace {

// b^k compared against n without overflow: returns -1, 0, +1.
int compare_power(u64 b, unsigned k, u64 n) {
    u128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
        acc *= b;
        if (acc > n) return 1;
    }
    return acc == n ? 0 : -1;
}

}  // namespace

u64 integer_root(u64 n, unsigned k) {
    if (k == 0) throw DomainError("root degree must be positive");
    if (k == 1 || n < 2) return n;
    auto guess = static_cast<u64>(std::pow(static_cast<long double>(n), 1.0L / k));
    // Float seed is within a step or two; settle it exactly.
    while (guess > 0 && compare_power(guess, k, n) > 0) --guess;
    while (compare_power(guess + 1, k, n) <= 0) ++guess;
    return guess;
}

bool is_perfect_power(u64 n) {
    if (n < 4) return false;
    const unsigned max_k = static_cast<unsigned>(std::bit_width(n));
    for (unsigned k = 2; k <= max_k; ++k) {
        const u64 root = integer_root(n, k);
        if (root < 2) break;
        if (compare_power(root, k, n) == 0) return true;
    }
    return false;
}

unsigned ceil_log2(u64 n) noexcept {
    if (n <= 1) return 0;
    return static_cast<unsigned>(std::bit_width(n - 1));
}

}  // namespace dopo::numtheory
