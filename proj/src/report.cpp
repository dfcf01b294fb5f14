#include "dopo_shor/report.hpp"

#include "dopo_shor/network.hpp"
#include "dopo_shor/register_state.hpp"

namespace dopo::report {

using nlohmann::json;

json to_json(const pipeline::FactorReport& r) {
    json j = to_json_deterministic(r);
    j["stage_timings"] = r.stage_timings;
    return j;
}

json to_json_deterministic(const pipeline::FactorReport& r) {
    json history = json::array();
    for (const auto& a : r.base_history) {
        history.push_back({{"a", a.base},
                           {"order", a.order ? json(*a.order) : json(nullptr)},
                           {"outcome", a.outcome}});
    }
    json frames = json::array();
    for (const auto& f : r.frames) {
        frames.push_back(
            {{"file", f.file}, {"group", f.group}, {"subframe", f.subframe}, {"scale", f.scale}});
    }
    json j;
    j["n_value"] = r.n_value;
    j["base_history"] = std::move(history);
    j["mode"] = pipeline::to_string(r.mode);
    j["n_bits"] = r.n_bits;
    j["survivors"] = r.survivors;
    j["order"] = r.order ? json(*r.order) : json(nullptr);
    j["factors"] = r.factors ? json::array({r.factors->first, r.factors->second}) : json(nullptr);
    j["schmidt_k"] = r.schmidt_k ? json(*r.schmidt_k) : json(nullptr);
    j["frames"] = std::move(frames);
    j["seed"] = r.seed;
    j["status"] = pipeline::to_string(r.status);
    j["message"] = r.message;
    return j;
}

json to_json(const registers::ClassicalState& state) {
    json terms = json::array();
    for (const auto& t : state.terms()) terms.push_back(json::array({t.x, t.w}));
    return {{"n_bits", state.control_bits()},
            {"m_bits", state.work_bits()},
            {"amplitude", state.amplitude()},
            {"terms", std::move(terms)}};
}

json to_json(const sim::Network& net) {
    json pulses = json::array();
    for (const auto& p : net.pulses()) {
        const int sign = p.c > 0.0 ? 1 : (p.c < 0.0 ? -1 : 0);
        pulses.push_back({{"slot", p.slot},
                          {"sign", sign},
                          {"polarization", std::string(1, sim::to_char(p.polarization))},
                          {"alive", p.alive}});
    }
    const auto& cfg = net.config();
    return {{"group_size", cfg.group_size},
            {"group_count", cfg.group_count},
            {"slots_per_roundtrip", cfg.slots_per_roundtrip},
            {"pulses", std::move(pulses)}};
}

}  // namespace dopo::report
