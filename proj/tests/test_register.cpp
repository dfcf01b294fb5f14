#include "dopo_shor/errors.hpp"
#include "dopo_shor/numtheory.hpp"
#include "dopo_shor/register_state.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>

using namespace dopo::registers;

namespace {

std::vector<u64> xs(const ClassicalState& s) { return s.control_values(); }

std::string polarization_string(u64 w, unsigned width) {
    std::string out;
    for (bool b : to_bits_msb(w, width)) out.push_back(b ? 'V' : 'H');
    return out;
}

}  // namespace

TEST(RegisterConfig, Defaults) {
    const auto cfg = RegisterConfig::make(15, 7);
    EXPECT_EQ(cfg.m, 4U);
    EXPECT_EQ(cfg.n, 8U);
    EXPECT_EQ(RegisterConfig::make(15, 7, 4).n, 4U);
    EXPECT_EQ(RegisterConfig::make(91, 2).m, 7U);
    EXPECT_GT(RegisterConfig::make(17 * 3, 2).work_size(), 17U * 3 - 1);
    EXPECT_THROW((void)RegisterConfig::make(16, 3), dopo::DomainError);
    EXPECT_THROW((void)RegisterConfig::make(15, 0), dopo::DomainError);
    EXPECT_THROW((void)RegisterConfig::make(15, 15), dopo::DomainError);
    EXPECT_THROW((void)RegisterConfig::make(15, 7, 0), dopo::DomainError);
    EXPECT_THROW((void)RegisterConfig::make(15, 7, 27), dopo::DomainError);
}

TEST(InitialState, Enumerates) {
    const auto s2 = initial_state(RegisterConfig::make(15, 7, 2));
    EXPECT_EQ(s2.terms(), (std::vector<Term>{{0, 0}, {1, 0}, {2, 0}, {3, 0}}));

    const auto s4 = initial_state(RegisterConfig::make(15, 7, 4));
    ASSERT_EQ(s4.size(), 16U);
    for (const Term& t : s4.terms()) EXPECT_EQ(t.w, 0U);
    EXPECT_DOUBLE_EQ(s4.amplitude(), 0.25);

    const auto s1 = initial_state(RegisterConfig::make(15, 7, 1));
    EXPECT_EQ(s1.terms(), (std::vector<Term>{{0, 0}, {1, 0}}));
}

TEST(ClassicalState, Invariants) {
    EXPECT_THROW(ClassicalState(2, 2, {}), dopo::DomainError);
    EXPECT_THROW(ClassicalState(2, 2, {{4, 0}}), dopo::DomainError);
    EXPECT_THROW(ClassicalState(2, 2, {{1, 4}}), dopo::DomainError);
    EXPECT_THROW(ClassicalState(2, 2, {{1, 0}, {1, 1}}), dopo::DomainError);
}

TEST(ApplyMef, WorkedInstance) {
    const auto cfg = RegisterConfig::make(15, 7, 4);
    const auto s = apply_mef(initial_state(cfg), cfg);
    std::map<u64, u64> w;
    for (const Term& t : s.terms()) w[t.x] = t.w;
    EXPECT_EQ(w[0], 0U);
    EXPECT_EQ(w[1], 6U);
    EXPECT_EQ(w[2], 3U);
    EXPECT_EQ(w[3], 12U);
    // Polarization strings of the four Schmidt components, MSB first.
    EXPECT_EQ(polarization_string(w[0], 4), "HHHH");
    EXPECT_EQ(polarization_string(w[1], 4), "HVVH");
    EXPECT_EQ(polarization_string(w[2], 4), "HHVV");
    EXPECT_EQ(polarization_string(w[3], 4), "VVHH");
}

TEST(ApplyMef, NotCoprimePropagates) {
    const auto cfg = RegisterConfig::make(15, 6, 4);
    EXPECT_THROW((void)apply_mef(initial_state(cfg), cfg), dopo::NotCoprimeError);
}

TEST(ApplyMef, PreservesControlValues) {
    for (u64 n : {15ULL, 21ULL, 35ULL}) {
        for (u64 a = 1; a < n; ++a) {
            if (dopo::numtheory::gcd(a, n) != 1) continue;
            const auto cfg = RegisterConfig::make(n, a, 6);
            const auto before = initial_state(cfg);
            const auto after = apply_mef(before, cfg);
            ASSERT_EQ(xs(before), xs(after));
            for (const Term& t : after.terms())
                ASSERT_EQ(t.w + 1, oracle::naive_mod_exp(a, t.x, n));
        }
    }
}

TEST(SchmidtNumber, Examples) {
    const auto c15 = RegisterConfig::make(15, 7, 4);
    EXPECT_EQ(schmidt_number(apply_mef(initial_state(c15), c15)), 4.0);

    const auto c1 = RegisterConfig::make(15, 1, 4);
    EXPECT_EQ(schmidt_number(apply_mef(initial_state(c1), c1)), 1.0);

    // 2^x mod 21 cycles with period 6: 64 inputs split 11,11,11,11,10,10.
    const auto c21 = RegisterConfig::make(21, 2, 6);
    EXPECT_DOUBLE_EQ(schmidt_number(apply_mef(initial_state(c21), c21)), 4096.0 / 684.0);
}

TEST(SchmidtNumber, EqualsOrderWhenOrderDividesRegister) {
    for (u64 n : {15ULL, 21ULL, 33ULL, 35ULL, 39ULL, 51ULL, 85ULL}) {
        const unsigned bits = 2 * dopo::numtheory::ceil_log2(n);
        for (u64 a = 1; a < n; ++a) {
            if (dopo::numtheory::gcd(a, n) != 1) continue;
            const u64 r = dopo::numtheory::multiplicative_order(a, n);
            if ((u64{1} << bits) % r != 0) continue;
            const auto cfg = RegisterConfig::make(n, a, bits);
            ASSERT_EQ(schmidt_number(apply_mef(initial_state(cfg), cfg)), static_cast<double>(r))
                << "N=" << n << " a=" << a;
        }
    }
}

TEST(ProjectWork, Examples) {
    const auto c15 = RegisterConfig::make(15, 7, 4);
    const auto mef = apply_mef(initial_state(c15), c15);
    const auto kept = project_work(mef, 0);
    EXPECT_EQ(xs(kept), (std::vector<u64>{0, 4, 8, 12}));
    EXPECT_DOUBLE_EQ(kept.amplitude(), 0.5);

    EXPECT_THROW((void)project_work(mef, 1), dopo::NoSurvivorsError);
    EXPECT_THROW((void)project_work(mef, 16), dopo::DomainError);

    const auto c21 = RegisterConfig::make(21, 2, 6);
    const auto kept21 = project_work(apply_mef(initial_state(c21), c21), 0);
    std::vector<u64> expected;
    for (u64 x = 0; x < 64; x += 6) expected.push_back(x);
    EXPECT_EQ(xs(kept21), expected);
}

TEST(ProjectWork, SurvivorsAreMultiplesOfOrder) {
    for (u64 n : {15ULL, 21ULL, 33ULL, 55ULL, 91ULL}) {
        const unsigned bits = 8;
        for (u64 a = 2; a < n; ++a) {
            if (dopo::numtheory::gcd(a, n) != 1) continue;
            const auto cfg = RegisterConfig::make(n, a, bits);
            const auto kept = project_work(apply_mef(initial_state(cfg), cfg), 0);
            ASSERT_EQ(xs(kept), oracle::unit_exponents(a, n, bits));
            const u64 r = dopo::numtheory::multiplicative_order(a, n);
            for (u64 x : xs(kept)) ASSERT_EQ(x % r, 0U);
            ASSERT_EQ(kept.size(), ((u64{1} << bits) + r - 1) / r);
        }
    }
}

TEST(Bits, MsbFirst) {
    EXPECT_EQ(to_bits_msb(6, 4), (std::vector<bool>{false, true, true, false}));
    EXPECT_EQ(from_bits_msb({true, true, false, false}), 12U);
    EXPECT_THROW((void)to_bits_msb(16, 4), dopo::DomainError);
    for (u64 v = 0; v < 256; ++v) ASSERT_EQ(from_bits_msb(to_bits_msb(v, 8)), v);
}
