#include "dopo_shor/network.hpp"
#include "dopo_shor/register_state.hpp"
#include "dopo_shor/report.hpp"

#include <gtest/gtest.h>

using namespace dopo;

TEST(Report, SchemaKeys) {
    pipeline::RunOptions opts;
    opts.modulus = 15;
    opts.base = 7;
    opts.bits = 4;
    const auto j = report::to_json(pipeline::factor(opts));
    for (const char* key : {"n_value", "base_history", "mode", "n_bits", "survivors", "order",
                            "factors", "schmidt_k", "frames", "seed", "status", "stage_timings"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["n_value"], 15);
    EXPECT_EQ(j["mode"], "exact");
    EXPECT_EQ(j["n_bits"], 4);
    EXPECT_EQ(j["survivors"], nlohmann::json({0, 4, 8, 12}));
    EXPECT_EQ(j["order"], 4);
    EXPECT_EQ(j["factors"], nlohmann::json({3, 5}));
    EXPECT_EQ(j["schmidt_k"], 4.0);
    EXPECT_EQ(j["status"], "success");
    EXPECT_EQ(j["base_history"][0]["a"], 7);
    EXPECT_EQ(j["base_history"][0]["outcome"], "success");
    EXPECT_TRUE(j["stage_timings"].contains("total"));
    EXPECT_FALSE(report::to_json_deterministic(pipeline::factor(opts)).contains("stage_timings"));
}

TEST(Report, NullsForMissingValues) {
    pipeline::RunOptions opts;
    opts.modulus = 16;
    const auto j = report::to_json(pipeline::factor(opts));
    EXPECT_EQ(j["status"], "invalid_input");
    EXPECT_TRUE(j["order"].is_null());
    EXPECT_TRUE(j["factors"].is_null());
    EXPECT_TRUE(j["schmidt_k"].is_null());
    EXPECT_TRUE(j["frames"].empty());
}

TEST(Report, RegisterState) {
    const auto cfg = registers::RegisterConfig::make(15, 7, 2);
    const auto j = report::to_json(registers::apply_mef(registers::initial_state(cfg), cfg));
    EXPECT_EQ(j["n_bits"], 2);
    EXPECT_EQ(j["m_bits"], 4);
    EXPECT_DOUBLE_EQ(j["amplitude"].get<double>(), 0.5);
    EXPECT_EQ(j["terms"], nlohmann::json::parse("[[0,0],[1,6],[2,3],[3,12]]"));
}

TEST(Report, Network) {
    using namespace sim;
    NetworkConfig cfg;
    cfg.group_size = 2;
    cfg.group_count = 1;
    const Network net(cfg, {{0, -1.0, Polarization::V, true}, {1, 0.0, Polarization::H, false}});
    const auto j = report::to_json(net);
    EXPECT_EQ(j["group_size"], 2);
    EXPECT_EQ(j["pulses"][0]["sign"], -1);
    EXPECT_EQ(j["pulses"][0]["polarization"], "V");
    EXPECT_EQ(j["pulses"][1]["sign"], 0);
    EXPECT_EQ(j["pulses"][1]["alive"], false);
}
