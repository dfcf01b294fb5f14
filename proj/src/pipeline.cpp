#include "dopo_shor/pipeline.hpp"

#include "dopo_shor/errors.hpp"
#include "dopo_shor/network.hpp"
#include "dopo_shor/numtheory.hpp"
#include "dopo_shor/pgm.hpp"
#include "dopo_shor/register_state.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <set>

namespace dopo::pipeline {

namespace nt = dopo::numtheory;

std::string to_string(Mode mode) { return mode == Mode::Exact ? "exact" : "sim"; }

Mode parse_mode(const std::string& text) {
    if (text == "exact") return Mode::Exact;
    if (text == "sim") return Mode::Sim;
    throw DomainError("mode must be 'exact' or 'sim', got '" + text + "'");
}

std::string to_string(Status status) {
    switch (status) {
        case Status::Success: return "success";
        case Status::LuckyFactor: return "lucky_factor";
        case Status::RetryExhausted: return "retry_exhausted";
        case Status::InvalidInput: return "invalid_input";
        case Status::InternalError: return "internal_error";
    }
    return "internal_error";
}

int exit_code(Status status) noexcept {
    switch (status) {
        case Status::Success:
        case Status::LuckyFactor: return 0;
        case Status::InvalidInput: return 2;
        case Status::RetryExhausted: return 3;
        case Status::InternalError: return 4;
    }
    return 4;
}

optics::HoleGeometry RunOptions::geometry() const {
    return optics::HoleGeometry::trapezoid(pitch, distance, grid_width, grid_height);
}

std::optional<Rejection> validate_input(u64 modulus) {
    using K = Rejection::Kind;
    const std::string n = std::to_string(modulus);
    if (modulus < 9) return Rejection{K::TooSmall, n + " is too small to be an odd composite"};
    if (modulus >= nt::kMaxModulus) return Rejection{K::TooLarge, n + " does not fit below 2^63"};
    if (modulus % 2 == 0) return Rejection{K::Even, n + " is even; 2 is a factor"};
    if (nt::is_prime(modulus)) return Rejection{K::Prime, n + " is prime"};
    if (nt::is_perfect_power(modulus)) return Rejection{K::PerfectPower, n + " is a perfect power"};
    return std::nullopt;
}

u64 extract_order(const std::vector<u64>& survivors, u64 base, u64 modulus) {
    if (survivors.empty() || std::find(survivors.begin(), survivors.end(), 0) == survivors.end())
        throw ConsistencyError("survivor list must contain x = 0");
    u64 r = 0;
    u64 smallest = 0;
    for (u64 x : survivors) {
        if (x == 0) continue;
        r = std::gcd(r, x);
        smallest = smallest == 0 ? x : std::min(smallest, x);
    }
    if (r == 0) throw OrderOutOfRangeError("only x = 0 survived; the order needs a wider control register");
    if (smallest != r)
        throw ConsistencyError("smallest nonzero survivor " + std::to_string(smallest) +
                               " differs from their gcd " + std::to_string(r));
    if (nt::mod_exp(base, r, modulus) != 1)
        throw ConsistencyError("a^r mod N != 1 for r = " + std::to_string(r));
    if (const u64 oracle = nt::multiplicative_order(base, modulus); oracle != r)
        throw ConsistencyError("survivors give r = " + std::to_string(r) + " but the order is " +
                               std::to_string(oracle));
    return r;
}

namespace {

using Clock = std::chrono::steady_clock;

class StageFailure : public std::runtime_error {
public:
    StageFailure(const std::string& stage, const std::string& what)
        : std::runtime_error("stage " + stage + ": " + what) {}
};

template <typename Fn>
auto timed(const std::string& stage, std::map<std::string, double>& timings, Fn&& fn) {
    const auto start = Clock::now();
    try {
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            timings[stage] += std::chrono::duration<double>(Clock::now() - start).count();
        } else {
            auto result = fn();
            timings[stage] += std::chrono::duration<double>(Clock::now() - start).count();
            return result;
        }
    } catch (const StageFailure&) {
        throw;
    } catch (const std::exception& e) {
        throw StageFailure(stage, e.what());
    }
}

u64 network_seed(u64 seed, unsigned attempt) {
    // splitmix64 step so neighbouring attempts get unrelated streams
    u64 z = seed + 0x9E3779B97F4A7C15ULL * (attempt + 1ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

PathResult run_exact(const RunOptions& opts, u64 base) {
    PathResult out;
    const auto cfg = registers::RegisterConfig::make(opts.modulus, base, opts.bits);
    out.n_bits = cfg.n;
    const auto entangled = timed("register", out.timings, [&] {
        return registers::apply_mef(registers::initial_state(cfg), cfg);
    });
    out.schmidt_k = registers::schmidt_number(entangled);
    const auto projected =
        timed("projection", out.timings, [&] { return registers::project_work(entangled, 0); });
    out.survivors = projected.control_values();
    return out;
}

PathResult run_sim(const RunOptions& opts, u64 base, const optics::TemplateBank* bank,
                   unsigned attempt) {
    PathResult out;
    const auto cfg = registers::RegisterConfig::make(opts.modulus, base, opts.bits);
    if (cfg.n < cfg.m)
        throw DomainError("sim mode stores a^x - 1 in the group's polarizations and needs n >= " +
                          std::to_string(cfg.m));
    out.n_bits = cfg.n;
    const optics::HoleGeometry geom = opts.geometry();

    const auto net_cfg =
        sim::NetworkConfig::full_basis(cfg.n, 1.0, opts.sigma, network_seed(opts.seed, attempt));
    auto net = timed("init", out.timings, [&] { return sim::init_network(net_cfg); });
    net = timed("prepare", out.timings,
                [&] { return sim::prepare_basis(net, sim::basis_targets(net_cfg)); });
    net = timed("mef", out.timings, [&] { return sim::write_mef(net, cfg.modulus, cfg.base); });

    // Entanglement measured on the simulated register pair, not the algebra.
    {
        std::vector<registers::Term> terms;
        for (const auto& g : sim::readout_groups(net)) terms.push_back({g.control_value(), g.work_value()});
        out.schmidt_k = registers::schmidt_number(registers::ClassicalState(cfg.n, cfg.n, terms));
    }

    net = timed("polarizer", out.timings,
                [&] { return sim::apply_polarizer(net, sim::Polarization::H); });
    const auto video = timed("render", out.timings, [&] { return optics::render_video(net, geom); });
    out.frame_count = video.size();

    if (opts.export_frames && opts.out_dir) {
        timed("export", out.timings, [&] {
            std::filesystem::create_directories(*opts.out_dir);
            const bool split = optics::frames_per_group(cfg.n) > 1;
            for (const auto& f : video) {
                std::string name = "frame_" + std::to_string(f.group);
                if (split) name += "_" + std::to_string(f.subframe);
                name += ".pgm";
                const double scale = optics::write_pgm16(*opts.out_dir / name, f);
                out.frames.push_back({name, f.group, f.subframe, scale});
            }
        });
    }

    const auto decoded = timed("decode", out.timings, [&] {
        if (bank != nullptr) return optics::decode_group_value(video, *bank);
        return optics::decode_group_value(video, geom);
    });
    for (const auto& d : decoded) out.survivors.push_back(d.value);
    std::sort(out.survivors.begin(), out.survivors.end());
    out.intact_frames = decoded.size() * optics::frames_per_group(cfg.n);
    return out;
}

namespace {

std::optional<std::string> check_options(const RunOptions& opts) {
    if (auto rejection = validate_input(opts.modulus)) return rejection->reason;
    if (opts.base && (*opts.base == 0 || *opts.base >= opts.modulus))
        return "base must satisfy 0 < a < N";
    const unsigned m = nt::ceil_log2(opts.modulus);
    const unsigned n = opts.bits.value_or(2 * m);
    if (n == 0 || n > registers::kMaxControlBits)
        return "control width must be in [1, " + std::to_string(registers::kMaxControlBits) + "]";
    if (opts.retries == 0) return "retry budget must be positive";
    if (opts.mode == Mode::Sim) {
        if (n < m) return "sim mode needs at least " + std::to_string(m) + " control bits";
        if (n > 20) return "sim mode supports at most 20 control bits";
        if (!(opts.sigma >= 0.0) || opts.sigma >= 0.5) return "sigma must lie in [0, 0.5)";
        try {
            opts.geometry().validate();
        } catch (const std::exception& e) {
            return e.what();
        }
    }
    if (opts.export_frames && !opts.out_dir) return "frame export needs an output directory";
    return std::nullopt;
}

}  // namespace

FactorReport factor(const RunOptions& opts) {
    FactorReport report;
    report.n_value = opts.modulus;
    report.mode = opts.mode;
    report.seed = opts.seed;
    const auto started = Clock::now();

    if (auto problem = check_options(opts)) {
        report.status = Status::InvalidInput;
        report.message = *problem;
        return report;
    }
    const u64 n_value = opts.modulus;
    report.n_bits = opts.bits.value_or(2 * nt::ceil_log2(n_value));

    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<u64> draw(2, n_value - 2);
    std::set<u64> tried;
    std::optional<optics::TemplateBank> bank;

    try {
        for (unsigned attempt = 0; attempt < opts.retries; ++attempt) {
            u64 a = 0;
            if (attempt == 0 && opts.base) {
                a = *opts.base;
            } else {
                if (tried.size() >= n_value - 3) break;  // every candidate in [2, N-2] used
                do {
                    a = draw(rng);
                } while (tried.contains(a));
            }
            tried.insert(a);

            if (const u64 g = nt::gcd(a, n_value); g > 1) {
                report.base_history.push_back({a, std::nullopt, "lucky_factor"});
                report.factors = std::minmax(g, n_value / g);
                report.status = Status::LuckyFactor;
                break;
            }

            PathResult path;
            if (opts.mode == Mode::Exact) {
                path = run_exact(opts, a);
            } else {
                if (!bank) bank = timed("templates", report.stage_timings,
                                        [&] { return optics::TemplateBank::build(opts.geometry()); });
                path = run_sim(opts, a, &*bank, attempt);
            }
            for (const auto& [stage, secs] : path.timings) report.stage_timings[stage] += secs;
            report.survivors = path.survivors;
            report.schmidt_k = path.schmidt_k;
            report.frames = std::move(path.frames);

            u64 r = 0;
            try {
                const auto t0 = Clock::now();
                r = extract_order(path.survivors, a, n_value);
                report.stage_timings["order"] += std::chrono::duration<double>(Clock::now() - t0).count();
            } catch (const OrderOutOfRangeError&) {
                report.base_history.push_back({a, std::nullopt, "order_out_of_range"});
                continue;
            }
            report.order = r;
            if (r % 2 == 1) {
                report.base_history.push_back({a, r, "odd_order"});
                continue;
            }
            const u64 y = nt::mod_exp(a, r / 2, n_value);
            if (y == n_value - 1) {
                report.base_history.push_back({a, r, "trivial_root"});
                continue;
            }
            u64 p = nt::gcd(y - 1, n_value);
            u64 q = nt::gcd(y + 1, n_value);
            if (p * q != n_value) q = n_value / p;
            if (p > q) std::swap(p, q);

            // Success is re-derived from scratch rather than trusted.
            if (!(p > 1 && q < n_value && p * q == n_value && r % 2 == 0 &&
                  nt::mod_exp(a, r, n_value) == 1))
                throw ConsistencyError("factor check failed for a = " + std::to_string(a));
            report.base_history.push_back({a, r, "success"});
            report.factors = std::pair{p, q};
            report.status = Status::Success;
            break;
        }
        if (report.status != Status::Success && report.status != Status::LuckyFactor) {
            report.status = Status::RetryExhausted;
            report.message = "no base produced a factor in " +
                             std::to_string(report.base_history.size()) + " attempts";
        }
    } catch (const std::exception& e) {
        report.status = Status::InternalError;
        report.message = e.what();
    }
    report.stage_timings["total"] = std::chrono::duration<double>(Clock::now() - started).count();
    return report;
}

}  // namespace dopo::pipeline
