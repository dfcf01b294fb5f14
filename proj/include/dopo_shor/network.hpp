#pragma once

// Time-multiplexed DOPO pulse train. Each pulse carries a signed in-phase
// amplitude c (its sign is the phase bit: c > 0 <-> 0, c < 0 <-> pi) and a
// polarization (H <-> 0, V <-> 1). Consecutive runs of `group_size` pulses
// form one group; bit order inside a group is MSB-first in slot order.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace dopo::sim {

using u64 = std::uint64_t;

enum class Polarization : std::uint8_t { H = 0, V = 1 };

[[nodiscard]] char to_char(Polarization p) noexcept;

struct Pulse {
    std::size_t slot;
    double c;
    Polarization polarization;
    bool alive;
};

struct NetworkConfig {
    unsigned group_size = 4;
    u64 group_count = 16;
    double amplitude = 1.0;       // nominal |c| above threshold
    double sigma = 0.0;           // Gaussian perturbation on c at start-up
    double eps = 0.01;            // homodyne decision threshold
    u64 seed = 0;
    unsigned slots_per_roundtrip = 60;  // cavity round trip in pulse periods; metadata only

    /// group_count = 2^n, eps = amplitude / 100.
    static NetworkConfig full_basis(unsigned n, double amplitude = 1.0, double sigma = 0.0,
                                    u64 seed = 0);

    [[nodiscard]] std::size_t total_pulses() const noexcept {
        return static_cast<std::size_t>(group_size) * group_count;
    }

    /// Throws DomainError on a zero group size, non-positive amplitude,
    /// negative sigma or eps >= amplitude.
    void validate() const;
};

class Network {
public:
    Network(NetworkConfig config, std::vector<Pulse> pulses);

    [[nodiscard]] const NetworkConfig& config() const noexcept { return config_; }
    [[nodiscard]] const std::vector<Pulse>& pulses() const noexcept { return pulses_; }
    [[nodiscard]] std::vector<Pulse>& pulses() noexcept { return pulses_; }
    [[nodiscard]] std::span<const Pulse> group(u64 index) const;
    [[nodiscard]] u64 group_count() const noexcept { return config_.group_count; }

private:
    NetworkConfig config_;
    std::vector<Pulse> pulses_;
};

/// Random 0/pi phases (c = +-A + noise), all H, all alive.
[[nodiscard]] Network init_network(const NetworkConfig& cfg, std::mt19937_64& rng);
[[nodiscard]] Network init_network(const NetworkConfig& cfg);

/// Homodyne sign decision: 0 for c > eps, 1 for c < -eps. Throws
/// AmbiguousReadoutError inside the dead band (which includes dead pulses).
[[nodiscard]] bool bhd_readout(const Pulse& p, double eps);

/// Phase targets enumerating x = g in group g (MSB-first).
[[nodiscard]] std::vector<bool> basis_targets(const NetworkConfig& cfg);

/// Feedback f = -2(1 - delta)c per pulse, delta = [readout == target].
[[nodiscard]] Network prepare_basis(const Network& net, const std::vector<bool>& targets);

/// Decodes x from each group's phases, computes v = a^x mod N - 1 and writes
/// v MSB-first into the group's polarizations (bit 1 -> V).
[[nodiscard]] Network write_mef(const Network& net, u64 modulus, u64 base);

/// Pulses whose polarization differs from `axis` are eliminated (alive = false, c = 0).
[[nodiscard]] Network apply_polarizer(const Network& net, Polarization axis);

struct GroupReadout {
    u64 group;
    std::vector<bool> alive;
    std::vector<bool> phase;   // meaningful only where alive
    std::vector<Polarization> polarization;

    [[nodiscard]] bool intact() const noexcept;
    /// Control value from the phase bits; requires an intact group.
    [[nodiscard]] u64 control_value() const;
    /// Work value from the polarization bits (H = 0, V = 1).
    [[nodiscard]] u64 work_value() const;
    [[nodiscard]] std::string mask_string() const;
    [[nodiscard]] std::string polarization_string() const;
};

/// Electronic tap on the network state, group by group.
[[nodiscard]] std::vector<GroupReadout> readout_groups(const Network& net);

}  // namespace dopo::sim
