#pragma once

// End-to-end factoring: pick a base, find the survivors of the polarizer
// projection (exactly, or through the pulse network and fringe frames), read
// the order off the survivors and finish with gcd(a^(r/2) +- 1, N).

#include "dopo_shor/optics.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dopo::pipeline {

using u64 = std::uint64_t;

enum class Mode { Exact, Sim };

[[nodiscard]] std::string to_string(Mode mode);
/// "exact" or "sim"; throws DomainError otherwise.
[[nodiscard]] Mode parse_mode(const std::string& text);

struct RunOptions {
    u64 modulus = 15;
    std::optional<u64> base;             // drawn from the seeded rng when absent
    Mode mode = Mode::Exact;
    std::optional<unsigned> bits;        // control register width; default 2*ceil(log2 N)
    double pitch = 100e-6;
    double distance = 1.0;
    unsigned grid_width = 256;
    unsigned grid_height = 256;
    double sigma = 0.0;                  // start-up noise in units of the nominal amplitude
    u64 seed = 0;
    std::optional<std::filesystem::path> out_dir;
    bool export_frames = false;
    unsigned retries = 16;

    [[nodiscard]] optics::HoleGeometry geometry() const;
};

struct Rejection {
    enum class Kind { TooSmall, TooLarge, Even, Prime, PerfectPower };
    Kind kind;
    std::string reason;
};

/// nullopt when N is an odd composite that is not a perfect power.
[[nodiscard]] std::optional<Rejection> validate_input(u64 modulus);

/// gcd of the nonzero survivors, cross-checked against the minimum nonzero
/// survivor, a^r mod N and the brute-force order. Throws
/// OrderOutOfRangeError for {0} and ConsistencyError on any disagreement.
[[nodiscard]] u64 extract_order(const std::vector<u64>& survivors, u64 base, u64 modulus);

struct FrameRef {
    std::string file;
    u64 group;
    unsigned subframe;
    double scale;
};

struct PathResult {
    unsigned n_bits = 0;
    std::vector<u64> survivors;
    double schmidt_k = 0.0;
    std::vector<FrameRef> frames;
    std::size_t frame_count = 0;
    std::size_t intact_frames = 0;
    std::map<std::string, double> timings;
};

/// initial_state -> apply_mef -> project_work(0).
[[nodiscard]] PathResult run_exact(const RunOptions& opts, u64 base);

/// init_network -> prepare_basis -> write_mef -> apply_polarizer(H) ->
/// render_video -> decode_group_value. Pass a bank to reuse templates across
/// runs with the same geometry. `attempt` perturbs the network seed.
[[nodiscard]] PathResult run_sim(const RunOptions& opts, u64 base,
                                 const optics::TemplateBank* bank = nullptr, unsigned attempt = 0);

enum class Status { Success, LuckyFactor, RetryExhausted, InvalidInput, InternalError };

[[nodiscard]] std::string to_string(Status status);
/// Process exit code: 0 success (including a lucky gcd), 2 invalid input,
/// 3 retries exhausted, 4 internal error.
[[nodiscard]] int exit_code(Status status) noexcept;

struct Attempt {
    u64 base;
    std::optional<u64> order;
    std::string outcome;  // success, lucky_factor, odd_order, trivial_root, order_out_of_range
};

struct FactorReport {
    u64 n_value = 0;
    std::vector<Attempt> base_history;
    Mode mode = Mode::Exact;
    unsigned n_bits = 0;
    std::vector<u64> survivors;
    std::optional<u64> order;
    std::optional<std::pair<u64, u64>> factors;
    std::optional<double> schmidt_k;
    std::vector<FrameRef> frames;
    u64 seed = 0;
    Status status = Status::InternalError;
    std::string message;
    std::map<std::string, double> stage_timings;
};

/// Never throws for bad input or stage failures; the outcome is in `status`.
[[nodiscard]] FactorReport factor(const RunOptions& opts);

}  // namespace dopo::pipeline
