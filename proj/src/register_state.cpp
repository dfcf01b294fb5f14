#include "dopo_shor/register_state.hpp"

#include "dopo_shor/errors.hpp"
#include "dopo_shor/numtheory.hpp"

#include <cmath>
#include <map>
#include <string>
#include <unordered_set>

namespace dopo::registers {

RegisterConfig RegisterConfig::make(u64 modulus, u64 base, std::optional<unsigned> n) {
    if (modulus < 3 || modulus % 2 == 0 || modulus >= numtheory::kMaxModulus)
        throw DomainError("register modulus must be odd and in [3, 2^63)");
    if (base == 0 || base >= modulus) throw DomainError("base must satisfy 0 < a < N");

    const unsigned m = numtheory::ceil_log2(modulus);
    const unsigned control = n.value_or(2 * m);
    if (control == 0 || control > kMaxControlBits)
        throw DomainError("control register width must be in [1, " +
                          std::to_string(kMaxControlBits) + "], got " + std::to_string(control));
    return {modulus, base, control, m};
}

ClassicalState::ClassicalState(unsigned n, unsigned m, std::vector<Term> terms)
    : n_(n), m_(m), terms_(std::move(terms)) {
    if (terms_.empty()) throw DomainError("a register state needs at least one term");
    if (n_ > 63 || m_ > 63) throw DomainError("register width too large");
    std::unordered_set<u64> seen;
    seen.reserve(terms_.size());
    for (const Term& t : terms_) {
        if (t.x >> n_ != 0) throw DomainError("control value exceeds n bits");
        if (t.w >> m_ != 0) throw DomainError("work value exceeds m bits");
        if (!seen.insert(t.x).second) throw DomainError("duplicate control value");
    }
}

double ClassicalState::amplitude() const noexcept {
    return 1.0 / std::sqrt(static_cast<double>(terms_.size()));
}

std::vector<u64> ClassicalState::control_values() const {
    std::vector<u64> xs;
    xs.reserve(terms_.size());
    for (const Term& t : terms_) xs.push_back(t.x);
    return xs;
}

ClassicalState initial_state(const RegisterConfig& cfg) {
    std::vector<Term> terms;
    terms.reserve(cfg.control_size());
    for (u64 j = 0; j < cfg.control_size(); ++j) terms.push_back({j, 0});
    return {cfg.n, cfg.m, std::move(terms)};
}

ClassicalState apply_mef(const ClassicalState& state, const RegisterConfig& cfg) {
    const numtheory::MontCtx ctx{cfg.modulus};
    std::vector<Term> terms;
    terms.reserve(state.size());
    for (const Term& t : state.terms()) {
        // Stored shifted by one so that f(x) = 1 becomes the all-H string.
        const u64 f = numtheory::mod_exp(cfg.base, t.x, ctx);
        terms.push_back({t.x, f - 1});
    }
    return {state.control_bits(), cfg.m, std::move(terms)};
}

double schmidt_number(const ClassicalState& state) {
    std::map<u64, u64> counts;
    for (const Term& t : state.terms()) ++counts[t.w];
    const double total = static_cast<double>(state.size());
    u64 sum_sq = 0;
    for (const auto& [w, c] : counts) sum_sq += c * c;
    return total * total / static_cast<double>(sum_sq);
}

ClassicalState project_work(const ClassicalState& state, u64 target) {
    if (target >> state.work_bits() != 0) throw DomainError("target exceeds m bits");
    std::vector<Term> kept;
    for (const Term& t : state.terms()) {
        if (t.w == target) kept.push_back(t);
    }
    if (kept.empty())
        throw NoSurvivorsError("no term carries work value " + std::to_string(target));
    return {state.control_bits(), state.work_bits(), std::move(kept)};
}

std::vector<bool> to_bits_msb(u64 value, unsigned width) {
    if (width < 64 && value >> width != 0) throw DomainError("value does not fit in width");
    std::vector<bool> bits(width);
    for (unsigned k = 0; k < width; ++k) bits[k] = ((value >> (width - 1 - k)) & 1U) != 0;
    return bits;
}

u64 from_bits_msb(const std::vector<bool>& bits) {
    u64 value = 0;
    for (bool b : bits) value = (value << 1) | (b ? 1U : 0U);
    return value;
}

}  // namespace dopo::registers
