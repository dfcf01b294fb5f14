#pragma once

// Four-hole Fraunhofer interference: render a group of pulses as a fringe
// frame and match frames back to phase/mask configurations.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dopo_shor/network.hpp"

namespace dopo::optics {

using u64 = std::uint64_t;

inline constexpr unsigned kHoles = 4;

struct Point {
    double x;
    double y;
};

/// Four bits, one per hole; slot 0 is the most significant bit so that
/// "0100" (0, pi, 0, 0) reads as the value 4.
struct HoleBits {
    std::uint8_t value = 0;

    /// Parses "0100"; throws DomainError on anything but four 0/1 characters.
    static HoleBits parse(std::string_view text);
    static HoleBits all() noexcept { return {0xF}; }

    [[nodiscard]] bool operator[](unsigned slot) const noexcept {
        return ((value >> (kHoles - 1 - slot)) & 1U) != 0;
    }
    void set(unsigned slot, bool on) noexcept {
        const auto bit = static_cast<std::uint8_t>(1U << (kHoles - 1 - slot));
        value = on ? static_cast<std::uint8_t>(value | bit) : static_cast<std::uint8_t>(value & ~bit);
    }
    [[nodiscard]] HoleBits flipped() const noexcept { return {static_cast<std::uint8_t>(value ^ 0xF)}; }
    [[nodiscard]] unsigned count() const noexcept;
    [[nodiscard]] std::string str() const;

    friend bool operator==(HoleBits, HoleBits) = default;
};

struct HoleGeometry {
    std::array<Point, kHoles> holes;  // raster order: TL, TR, BL, BR
    double pitch = 100e-6;            // m
    double wavelength = 1536e-9;      // m
    double distance = 1.0;            // screen distance L, m
    unsigned width = 256;
    unsigned height = 256;
    double half_extent = 0.0;         // screen spans [-half_extent, half_extent]^2

    /// Default layout: an isosceles trapezoid, top row at (+-d/2, d/2), bottom
    /// row at (+-d, -d/2). Mirror-symmetric left/right but not under a half
    /// turn, so every multi-hole configuration has a distinct pattern.
    /// Screen half-extent 3*lambda*L/d.
    static HoleGeometry trapezoid(double pitch = 100e-6, double distance = 1.0,
                                  unsigned width = 256, unsigned height = 256,
                                  double wavelength = 1536e-9);

    /// 2x2 square of pitch d centred at the origin. Its patterns are invariant
    /// under a half turn of the aperture; kept for comparison.
    static HoleGeometry square(double pitch = 100e-6, double distance = 1.0,
                               unsigned width = 256, unsigned height = 256,
                               double wavelength = 1536e-9);

    /// Throws DomainError unless d > 0, L/d > 1e3, W, H >= 64 and extent > 0.
    void validate() const;

    /// FNV-1a over every field; keys the template-bank cache.
    [[nodiscard]] u64 hash() const noexcept;

    /// Screen coordinates of pixel (col, row); row 0 is the top (+y) edge.
    [[nodiscard]] Point pixel_position(unsigned col, unsigned row) const noexcept;
};

struct Frame {
    unsigned width = 0;
    unsigned height = 0;
    std::vector<double> intensity;  // row-major, row 0 on top
    u64 group = 0;
    unsigned subframe = 0;
    unsigned data_slots = kHoles;   // holes carrying data; the rest are reference padding
    std::array<double, kHoles> amplitudes{};
    HoleBits phases{};
    double normalization = 1.0;     // intensity of one unit hole

    [[nodiscard]] double at(unsigned col, unsigned row) const { return intensity[row * width + col]; }
    [[nodiscard]] double mean() const noexcept;
    [[nodiscard]] double max() const noexcept;
    [[nodiscard]] HoleBits mask() const noexcept;
};

/// I(p) = |sum_k A_k exp(i(phi_k + 2pi/(lambda L) r_k . p))|^2 at one screen point.
[[nodiscard]] double intensity_at(HoleBits phases, const std::array<double, kHoles>& amps,
                                  const HoleGeometry& geom, Point p);

[[nodiscard]] Frame render_frame(HoleBits phases, const std::array<double, kHoles>& amps,
                                 const HoleGeometry& geom);

/// Convenience: unit amplitude on every hole set in `mask`.
[[nodiscard]] Frame render_frame(HoleBits phases, HoleBits mask, const HoleGeometry& geom);

/// One frame per four slots of each group, in slot order. Alive pulses
/// contribute |c|/A with phase pi when c < 0; dead pulses contribute nothing.
/// A group whose size is not a multiple of four is padded at the end with
/// reference holes (phase 0, amplitude 1).
[[nodiscard]] std::vector<Frame> render_video(const sim::Network& net, const HoleGeometry& geom);
/// Same, with a static polarizer in front of each hole: a pulse reaches hole k
/// only when its polarization matches hole_axes[k]. Padding holes are unaffected.
[[nodiscard]] std::vector<Frame> render_video(const sim::Network& net, const HoleGeometry& geom,
                                              const std::array<sim::Polarization, kHoles>& hole_axes);

[[nodiscard]] unsigned frames_per_group(unsigned group_size) noexcept;

/// Additive Gaussian pixel noise at the given SNR (signal power = mean I^2).
/// Intensities are clamped at zero.
void add_pixel_noise(Frame& frame, double snr_db, std::mt19937_64& rng);

/// round(mean intensity / single-hole intensity). Throws DegradedFrameError
/// when the ratio is more than 0.25 from an integer.
[[nodiscard]] unsigned estimate_hole_count(const Frame& frame, const HoleGeometry& geom);

/// A phase class up to a global pi shift, restricted to the live holes.
struct Classification {
    HoleBits phases;  // canonical: dead holes 0, first live hole 0
    HoleBits mask;
    double score = 0.0;

    /// True when `candidate` equals `phases` on every live hole, possibly
    /// after a global flip.
    [[nodiscard]] bool contains(HoleBits candidate) const noexcept;
};

/// Canonical representative of `phases` on `mask`.
[[nodiscard]] HoleBits canonical_phases(HoleBits phases, HoleBits mask) noexcept;

class TemplateBank {
public:
    struct Entry {
        HoleBits mask;
        HoleBits phases;
        std::vector<double> pattern;  // zero mean, unit L2 norm
    };

    /// One template per (mask, canonical class) with at least two live holes.
    static TemplateBank build(const HoleGeometry& geom);

    /// Reads a cached bank; nullopt if missing, corrupt, or for another geometry.
    static std::optional<TemplateBank> load(const std::filesystem::path& path,
                                            const HoleGeometry& geom);
    static TemplateBank load_or_build(const std::filesystem::path& path, const HoleGeometry& geom);
    void save(const std::filesystem::path& path) const;

    [[nodiscard]] const std::vector<Entry>& entries() const noexcept { return entries_; }
    [[nodiscard]] u64 geometry_hash() const noexcept { return hash_; }
    [[nodiscard]] unsigned width() const noexcept { return width_; }
    [[nodiscard]] unsigned height() const noexcept { return height_; }

private:
    u64 hash_ = 0;
    unsigned width_ = 0;
    unsigned height_ = 0;
    std::vector<Entry> entries_;
};

struct MatchOptions {
    double accept = 0.9;       // minimum NCC score
    double tie_margin = 1e-9;  // best - runner_up below this is a tie
    double flat = 0.05;        // var/mean^2 below this reads as a single hole
    double dark = 0.25;        // mean below this fraction of one hole reads as empty
};

enum class MatchStatus { Ok, Empty, SingleHole, LowScore, Tie };

struct Match {
    MatchStatus status = MatchStatus::Ok;
    Classification result;
    double runner_up = 0.0;
};

/// Non-throwing matcher behind classify_frame.
[[nodiscard]] Match match_frame(const Frame& frame, const TemplateBank& bank,
                                const MatchOptions& opts = {});

/// Normalized cross-correlation against the template bank. An empty frame
/// classifies as mask 0000. Throws UnclassifiableFrameError on a low score or
/// a tie, including every single-hole frame (all four positions look alike).
[[nodiscard]] Classification classify_frame(const Frame& frame, const TemplateBank& bank,
                                            const MatchOptions& opts = {});
[[nodiscard]] Classification classify_frame(const Frame& frame, const HoleGeometry& geom,
                                            const MatchOptions& opts = {});

struct DecodedGroup {
    u64 group;
    u64 value;

    friend bool operator==(const DecodedGroup&, const DecodedGroup&) = default;
};

/// Values of the intact groups (every hole of every sub-frame lit). The
/// half-turn-free layout fixes each frame's phases up to a global flip; the
/// flip is resolved against the reference chain anchored by group 0 (prepared
/// all-zero) and the slot schedule that prepared group g with value g, and any
/// reference padding hole must decode to 0. Throws DecodeAnchorError if group 0
/// is missing or not an all-zero intact group, ConsistencyError if a frame's
/// class cannot hold its scheduled value.
[[nodiscard]] std::vector<DecodedGroup> decode_group_value(const std::vector<Frame>& frames,
                                                           const TemplateBank& bank,
                                                           const MatchOptions& opts = {});
[[nodiscard]] std::vector<DecodedGroup> decode_group_value(const std::vector<Frame>& frames,
                                                           const HoleGeometry& geom,
                                                           const MatchOptions& opts = {});

}  // namespace dopo::optics
