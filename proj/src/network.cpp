#include "dopo_shor/network.hpp"

#include "dopo_shor/errors.hpp"
#include "dopo_shor/numtheory.hpp"
#include "dopo_shor/register_state.hpp"

#include <cmath>
#include <string>

namespace dopo::sim {

char to_char(Polarization p) noexcept { return p == Polarization::H ? 'H' : 'V'; }

NetworkConfig NetworkConfig::full_basis(unsigned n, double amplitude, double sigma, u64 seed) {
    if (n == 0 || n > 20) throw DomainError("group size must be in [1, 20]");
    NetworkConfig cfg;
    cfg.group_size = n;
    cfg.group_count = u64{1} << n;
    cfg.amplitude = amplitude;
    cfg.sigma = sigma;
    cfg.eps = amplitude / 100.0;
    cfg.seed = seed;
    return cfg;
}

void NetworkConfig::validate() const {
    if (group_size == 0) throw DomainError("group size must be positive");
    if (group_count == 0) throw DomainError("group count must be positive");
    if (!(amplitude > 0.0)) throw DomainError("nominal amplitude must be positive");
    if (!(sigma >= 0.0)) throw DomainError("noise sigma must be non-negative");
    if (!(eps >= 0.0) || eps >= amplitude) throw DomainError("threshold must satisfy 0 <= eps < A");
}

Network::Network(NetworkConfig config, std::vector<Pulse> pulses)
    : config_(config), pulses_(std::move(pulses)) {
    config_.validate();
    if (pulses_.size() != config_.total_pulses())
        throw DomainError("pulse count does not match configuration");
    for (std::size_t i = 0; i < pulses_.size(); ++i) {
        if (pulses_[i].slot != i) throw DomainError("slot indices must be contiguous from 0");
    }
}

std::span<const Pulse> Network::group(u64 index) const {
    if (index >= config_.group_count) throw DomainError("group index out of range");
    const std::size_t width = config_.group_size;
    return std::span<const Pulse>(pulses_).subspan(index * width, width);
}

Network init_network(const NetworkConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<Pulse> pulses(cfg.total_pulses());
    for (std::size_t i = 0; i < pulses.size(); ++i) {
        const double sign = coin(rng) ? -1.0 : 1.0;
        const double jitter = cfg.sigma > 0.0 ? cfg.sigma * noise(rng) : 0.0;
        pulses[i] = {i, sign * cfg.amplitude + jitter, Polarization::H, true};
    }
    return {cfg, std::move(pulses)};
}

Network init_network(const NetworkConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    return init_network(cfg, rng);
}

bool bhd_readout(const Pulse& p, double eps) {
    if (p.c > eps) return false;
    if (p.c < -eps) return true;
    throw AmbiguousReadoutError(p.slot, p.c);
}

std::vector<bool> basis_targets(const NetworkConfig& cfg) {
    std::vector<bool> targets;
    targets.reserve(cfg.total_pulses());
    for (u64 g = 0; g < cfg.group_count; ++g) {
        const auto bits = registers::to_bits_msb(g & ((u64{1} << cfg.group_size) - 1),
                                                 cfg.group_size);
        targets.insert(targets.end(), bits.begin(), bits.end());
    }
    return targets;
}

Network prepare_basis(const Network& net, const std::vector<bool>& targets) {
    if (targets.size() != net.pulses().size())
        throw DomainError("one phase target is needed per pulse");
    Network out = net;
    const double eps = net.config().eps;
    for (std::size_t j = 0; j < out.pulses().size(); ++j) {
        Pulse& p = out.pulses()[j];
        const double delta = bhd_readout(p, eps) == targets[j] ? 1.0 : 0.0;
        const double feedback = -2.0 * (1.0 - delta) * p.c;
        p.c += feedback;
    }
    return out;
}

Network write_mef(const Network& net, u64 modulus, u64 base) {
    const numtheory::MontCtx ctx{modulus};
    const unsigned width = net.config().group_size;
    Network out = net;
    for (u64 g = 0; g < net.group_count(); ++g) {
        std::vector<bool> phase;
        phase.reserve(width);
        for (const Pulse& p : net.group(g)) phase.push_back(bhd_readout(p, net.config().eps));
        const u64 x = registers::from_bits_msb(phase);
        const u64 v = numtheory::mod_exp(base, x, ctx) - 1;
        if (width < 64 && v >> width != 0)
            throw DomainError("work value " + std::to_string(v) + " does not fit in a group of " +
                              std::to_string(width) + " pulses");
        // Bit 1 drives the V switch, bit 0 the H switch.
        const auto bits = registers::to_bits_msb(v, width);
        for (unsigned k = 0; k < width; ++k) {
            out.pulses()[g * width + k].polarization = bits[k] ? Polarization::V : Polarization::H;
        }
    }
    return out;
}

Network apply_polarizer(const Network& net, Polarization axis) {
    Network out = net;
    for (Pulse& p : out.pulses()) {
        if (p.polarization != axis) {
            p.alive = false;
            p.c = 0.0;
        }
    }
    return out;
}

bool GroupReadout::intact() const noexcept {
    for (bool a : alive) {
        if (!a) return false;
    }
    return true;
}

u64 GroupReadout::control_value() const {
    if (!intact()) throw DomainError("control value needs an intact group");
    return registers::from_bits_msb(phase);
}

u64 GroupReadout::work_value() const {
    u64 v = 0;
    for (Polarization p : polarization) v = (v << 1) | static_cast<u64>(p);
    return v;
}

std::string GroupReadout::mask_string() const {
    std::string s;
    for (bool a : alive) s.push_back(a ? '1' : '0');
    return s;
}

std::string GroupReadout::polarization_string() const {
    std::string s;
    for (Polarization p : polarization) s.push_back(to_char(p));
    return s;
}

std::vector<GroupReadout> readout_groups(const Network& net) {
    std::vector<GroupReadout> out;
    out.reserve(net.group_count());
    const double eps = net.config().eps;
    for (u64 g = 0; g < net.group_count(); ++g) {
        GroupReadout r{g, {}, {}, {}};
        for (const Pulse& p : net.group(g)) {
            r.alive.push_back(p.alive);
            r.phase.push_back(p.alive ? bhd_readout(p, eps) : false);
            r.polarization.push_back(p.polarization);
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace dopo::sim
