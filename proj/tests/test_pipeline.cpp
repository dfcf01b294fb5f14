#include "dopo_shor/errors.hpp"
#include "dopo_shor/numtheory.hpp"
#include "dopo_shor/pgm.hpp"
#include "dopo_shor/pipeline.hpp"
#include "dopo_shor/report.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

using namespace dopo::pipeline;

namespace {

RunOptions small_sim(u64 modulus, u64 base, unsigned bits) {
    RunOptions o;
    o.modulus = modulus;
    o.base = base;
    o.bits = bits;
    o.mode = Mode::Sim;
    o.grid_width = 64;
    o.grid_height = 64;
    return o;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(ValidateInput, Rejections) {
    EXPECT_FALSE(validate_input(15).has_value());
    EXPECT_FALSE(validate_input(91).has_value());
    EXPECT_EQ(validate_input(16)->kind, Rejection::Kind::Even);
    EXPECT_EQ(validate_input(49)->kind, Rejection::Kind::PerfectPower);
    EXPECT_EQ(validate_input(13)->kind, Rejection::Kind::Prime);
    EXPECT_EQ(validate_input(1)->kind, Rejection::Kind::TooSmall);
    EXPECT_EQ(validate_input(dopo::numtheory::kMaxModulus + 1)->kind, Rejection::Kind::TooLarge);
}

TEST(ParseMode, Values) {
    EXPECT_EQ(parse_mode("exact"), Mode::Exact);
    EXPECT_EQ(parse_mode("sim"), Mode::Sim);
    EXPECT_THROW((void)parse_mode("quantum"), dopo::DomainError);
}

TEST(ExtractOrder, Examples) {
    EXPECT_EQ(extract_order({0, 4, 8, 12}, 7, 15), 4U);
    EXPECT_EQ(extract_order({0, 6, 12, 18, 24, 30, 36, 42, 48, 54, 60}, 2, 21), 6U);
    EXPECT_EQ(extract_order({0, 1, 2, 3}, 1, 15), 1U);
    EXPECT_THROW((void)extract_order({0}, 2, 21), dopo::OrderOutOfRangeError);
    EXPECT_THROW((void)extract_order({4, 8}, 7, 15), dopo::ConsistencyError);
    EXPECT_THROW((void)extract_order({0, 8}, 7, 15), dopo::ConsistencyError);
    EXPECT_THROW((void)extract_order({0, 2, 4}, 7, 15), dopo::ConsistencyError);
}

TEST(Factor, WorkedInstance) {
    RunOptions o;
    o.modulus = 15;
    o.base = 7;
    o.bits = 4;
    const FactorReport r = factor(o);
    EXPECT_EQ(r.status, Status::Success);
    EXPECT_EQ(r.survivors, (std::vector<u64>{0, 4, 8, 12}));
    EXPECT_EQ(r.order, 4U);
    EXPECT_EQ(r.factors, (std::pair<u64, u64>{3, 5}));
    EXPECT_EQ(r.schmidt_k, 4.0);
    EXPECT_EQ(exit_code(r.status), 0);
}

TEST(Factor, TrivialRootForcesRetry) {
    RunOptions o;
    o.modulus = 15;
    o.base = 14;  // order 2, 14 = -1
    const FactorReport r = factor(o);
    ASSERT_GE(r.base_history.size(), 2U);
    EXPECT_EQ(r.base_history[0].outcome, "trivial_root");
    EXPECT_TRUE(r.status == Status::Success || r.status == Status::LuckyFactor);
    ASSERT_TRUE(r.factors.has_value());
    EXPECT_EQ(r.factors->first * r.factors->second, 15U);

    o.retries = 1;
    EXPECT_EQ(factor(o).status, Status::RetryExhausted);
    EXPECT_EQ(exit_code(Status::RetryExhausted), 3);
}

TEST(Factor, LuckyGcd) {
    RunOptions o;
    o.modulus = 21;
    o.base = 6;
    const FactorReport r = factor(o);
    EXPECT_EQ(r.status, Status::LuckyFactor);
    EXPECT_EQ(r.factors, (std::pair<u64, u64>{3, 7}));
    EXPECT_EQ(exit_code(r.status), 0);
}

TEST(Factor, TwentyOne) {
    RunOptions o;
    o.modulus = 21;
    o.base = 2;
    const FactorReport r = factor(o);
    EXPECT_EQ(r.status, Status::Success);
    EXPECT_EQ(r.order, 6U);
    EXPECT_EQ(r.factors, (std::pair<u64, u64>{3, 7}));
}

TEST(Factor, RandomBasesAlwaysFactor) {
    for (u64 n : {15ULL, 21ULL, 33ULL, 35ULL, 91ULL, 143ULL}) {
        for (u64 seed = 0; seed < 20; ++seed) {
            RunOptions o;
            o.modulus = n;
            o.seed = seed;
            const FactorReport r = factor(o);
            ASSERT_TRUE(r.status == Status::Success || r.status == Status::LuckyFactor)
                << n << " seed " << seed << ": " << r.message;
            ASSERT_EQ(r.factors->first * r.factors->second, n);
            ASSERT_GT(r.factors->first, 1U);
            for (const auto& a : r.base_history) {
                ASSERT_GE(a.base, 2U);
                ASSERT_LE(a.base, n - 2);
            }
        }
    }
}

TEST(Factor, InvalidInputs) {
    RunOptions o;
    o.modulus = 16;
    EXPECT_EQ(factor(o).status, Status::InvalidInput);
    o.modulus = 15;
    o.base = 15;
    EXPECT_EQ(factor(o).status, Status::InvalidInput);
    o.base = 7;
    o.bits = 27;
    EXPECT_EQ(factor(o).status, Status::InvalidInput);
    o = small_sim(15, 7, 3);  // fewer control bits than work bits
    EXPECT_EQ(factor(o).status, Status::InvalidInput);
    o = small_sim(15, 7, 4);
    o.sigma = 0.6;
    EXPECT_EQ(factor(o).status, Status::InvalidInput);
    o = small_sim(15, 7, 4);
    o.grid_width = 16;
    EXPECT_EQ(factor(o).status, Status::InvalidInput);
    EXPECT_EQ(exit_code(Status::InvalidInput), 2);
    EXPECT_EQ(exit_code(Status::InternalError), 4);
}

TEST(RunSim, MatchesExact) {
    for (u64 n : {15ULL, 21ULL, 35ULL}) {
        for (u64 a = 2; a < n; ++a) {
            if (dopo::numtheory::gcd(a, n) != 1) continue;
            const RunOptions o = small_sim(n, a, dopo::numtheory::ceil_log2(n));
            ASSERT_EQ(run_sim(o, a).survivors, run_exact(o, a).survivors) << n << " " << a;
        }
    }
}

TEST(RunSim, SchmidtFromNetworkMatchesAlgebra) {
    for (u64 a : {2ULL, 4ULL, 7ULL, 11ULL, 14ULL}) {
        const RunOptions o = small_sim(15, a, 4);
        EXPECT_EQ(run_sim(o, a).schmidt_k, run_exact(o, a).schmidt_k) << a;
    }
}

TEST(RunSim, NoisyStartupOverSeeds) {
    for (u64 seed = 0; seed < 100; ++seed) {
        RunOptions o = small_sim(15, 7, 4);
        o.sigma = 0.1;
        o.seed = seed;
        const PathResult p = run_sim(o, 7);
        ASSERT_EQ(p.survivors, (std::vector<u64>{0, 4, 8, 12})) << "seed " << seed;
        ASSERT_EQ(p.frame_count, 16U);
        ASSERT_EQ(p.intact_frames, 4U);
    }
}

TEST(Factor, DeterministicForFixedSeed) {
    const auto dir_a = std::filesystem::temp_directory_path() / "dopo_shor_det_a";
    const auto dir_b = std::filesystem::temp_directory_path() / "dopo_shor_det_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    RunOptions o = small_sim(21, 2, 5);
    o.base.reset();
    o.seed = 99;
    o.sigma = 0.05;
    o.export_frames = true;
    o.out_dir = dir_a;
    const FactorReport ra = factor(o);
    o.out_dir = dir_b;
    const FactorReport rb = factor(o);
    ASSERT_TRUE(ra.status == Status::Success || ra.status == Status::LuckyFactor) << ra.message;

    auto ja = dopo::report::to_json_deterministic(ra);
    auto jb = dopo::report::to_json_deterministic(rb);
    EXPECT_EQ(ja.dump(), jb.dump());
    for (const auto& f : ra.frames) EXPECT_EQ(slurp(dir_a / f.file), slurp(dir_b / f.file)) << f.file;
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST(Factor, SimExportsNamedFrames) {
    const auto dir = std::filesystem::temp_directory_path() / "dopo_shor_frames";
    std::filesystem::remove_all(dir);
    RunOptions o = small_sim(15, 7, 4);
    o.export_frames = true;
    o.out_dir = dir;
    const FactorReport r = factor(o);
    ASSERT_EQ(r.status, Status::Success) << r.message;
    ASSERT_EQ(r.frames.size(), 16U);
    for (u64 g = 0; g < 16; ++g) {
        EXPECT_EQ(r.frames[g].file, "frame_" + std::to_string(g) + ".pgm");
        const auto img = dopo::optics::read_pgm16(dir / r.frames[g].file);
        EXPECT_EQ(img.width, 64U);
    }
    std::filesystem::remove_all(dir);
}
