#pragma once

#include "dopo_shor/pipeline.hpp"

#include <json.hpp>

namespace dopo::registers {
class ClassicalState;
}
namespace dopo::sim {
class Network;
}

namespace dopo::report {

/// Stable report schema: n_value, base_history, mode, n_bits, survivors,
/// order, factors, schmidt_k, frames, seed, status, stage_timings (plus message).
[[nodiscard]] nlohmann::json to_json(const pipeline::FactorReport& report);

/// Same report without stage_timings; identical options give identical bytes.
[[nodiscard]] nlohmann::json to_json_deterministic(const pipeline::FactorReport& report);

/// {"n_bits", "m_bits", "amplitude", "terms": [[x, w], ...]}
[[nodiscard]] nlohmann::json to_json(const registers::ClassicalState& state);

/// Per pulse: slot, sign of c (+1, -1, 0 for dead), polarization, alive.
[[nodiscard]] nlohmann::json to_json(const sim::Network& net);

}  // namespace dopo::report
