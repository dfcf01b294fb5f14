#include "dopo_shor/optics.hpp"

#include "dopo_shor/errors.hpp"
#include "dopo_shor/network.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>

namespace dopo::optics {

using cplx = std::complex<double>;

HoleBits HoleBits::parse(std::string_view text) {
    if (text.size() != kHoles) throw DomainError("expected four bits, got '" + std::string(text) + "'");
    HoleBits bits;
    for (unsigned k = 0; k < kHoles; ++k) {
        if (text[k] != '0' && text[k] != '1')
            throw DomainError("expected only 0/1 in '" + std::string(text) + "'");
        bits.set(k, text[k] == '1');
    }
    return bits;
}

unsigned HoleBits::count() const noexcept { return static_cast<unsigned>(std::popcount(value)); }

std::string HoleBits::str() const {
    std::string s(kHoles, '0');
    for (unsigned k = 0; k < kHoles; ++k) s[k] = (*this)[k] ? '1' : '0';
    return s;
}

namespace {

HoleGeometry with_screen(std::array<Point, kHoles> holes, double pitch, double distance,
                         unsigned width, unsigned height, double wavelength) {
    HoleGeometry g;
    g.holes = holes;
    g.pitch = pitch;
    g.wavelength = wavelength;
    g.distance = distance;
    g.width = width;
    g.height = height;
    g.half_extent = pitch > 0.0 ? 3.0 * wavelength * distance / pitch : 0.0;
    return g;
}

}  // namespace

HoleGeometry HoleGeometry::trapezoid(double pitch, double distance, unsigned width,
                                     unsigned height, double wavelength) {
    const double h = pitch / 2.0;
    return with_screen({Point{-h, h}, Point{h, h}, Point{-pitch, -h}, Point{pitch, -h}}, pitch,
                       distance, width, height, wavelength);
}

HoleGeometry HoleGeometry::square(double pitch, double distance, unsigned width,
                                  unsigned height, double wavelength) {
    const double h = pitch / 2.0;
    return with_screen({Point{-h, h}, Point{h, h}, Point{-h, -h}, Point{h, -h}}, pitch, distance,
                       width, height, wavelength);
}

void HoleGeometry::validate() const {
    if (!(pitch > 0.0)) throw DomainError("hole pitch must be positive");
    if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
    if (!(distance / pitch > 1e3)) throw DomainError("far field needs L/d > 1e3");
    if (width < 64 || height < 64) throw DomainError("screen grid must be at least 64x64");
    if (!(half_extent > 0.0)) throw DomainError("screen extent must be positive");
}

u64 HoleGeometry::hash() const noexcept {
    u64 h = 1469598103934665603ULL;
    auto mix = [&h](const void* data, std::size_t size) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < size; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    };
    for (const Point& p : holes) {
        mix(&p.x, sizeof p.x);
        mix(&p.y, sizeof p.y);
    }
    mix(&pitch, sizeof pitch);
    mix(&wavelength, sizeof wavelength);
    mix(&distance, sizeof distance);
    mix(&width, sizeof width);
    mix(&height, sizeof height);
    mix(&half_extent, sizeof half_extent);
    return h;
}

Point HoleGeometry::pixel_position(unsigned col, unsigned row) const noexcept {
    const double dx = 2.0 * half_extent / width;
    const double dy = 2.0 * half_extent / height;
    return {-half_extent + (col + 0.5) * dx, half_extent - (row + 0.5) * dy};
}

double Frame::mean() const noexcept {
    if (intensity.empty()) return 0.0;
    return std::accumulate(intensity.begin(), intensity.end(), 0.0) /
           static_cast<double>(intensity.size());
}

double Frame::max() const noexcept {
    if (intensity.empty()) return 0.0;
    return *std::max_element(intensity.begin(), intensity.end());
}

HoleBits Frame::mask() const noexcept {
    HoleBits m;
    for (unsigned k = 0; k < kHoles; ++k) m.set(k, amplitudes[k] > 0.0);
    return m;
}

double intensity_at(HoleBits phases, const std::array<double, kHoles>& amps,
                    const HoleGeometry& geom, Point p) {
    const double kappa = 2.0 * std::numbers::pi / (geom.wavelength * geom.distance);
    cplx field{0.0, 0.0};
    for (unsigned k = 0; k < kHoles; ++k) {
        const double phase = (phases[k] ? std::numbers::pi : 0.0) +
                             kappa * (geom.holes[k].x * p.x + geom.holes[k].y * p.y);
        field += amps[k] * std::polar(1.0, phase);
    }
    return std::norm(field);
}

Frame render_frame(HoleBits phases, const std::array<double, kHoles>& amps,
                   const HoleGeometry& geom) {
    geom.validate();
    for (double a : amps) {
        if (!(a >= 0.0)) throw DomainError("hole amplitudes must be non-negative");
    }
    const unsigned w = geom.width;
    const unsigned h = geom.height;
    const double kappa = 2.0 * std::numbers::pi / (geom.wavelength * geom.distance);

    // The phase r_k . p separates into a column factor and a row factor.
    std::array<std::vector<cplx>, kHoles> cols;
    std::array<std::vector<cplx>, kHoles> rows;
    for (unsigned k = 0; k < kHoles; ++k) {
        const double sign = phases[k] ? -1.0 : 1.0;
        cols[k].resize(w);
        rows[k].resize(h);
        for (unsigned i = 0; i < w; ++i) {
            const double px = geom.pixel_position(i, 0).x;
            cols[k][i] = sign * amps[k] * std::polar(1.0, kappa * geom.holes[k].x * px);
        }
        for (unsigned j = 0; j < h; ++j) {
            const double py = geom.pixel_position(0, j).y;
            rows[k][j] = std::polar(1.0, kappa * geom.holes[k].y * py);
        }
    }

    Frame f;
    f.width = w;
    f.height = h;
    f.amplitudes = amps;
    f.phases = phases;
    f.normalization = 1.0;
    f.intensity.resize(static_cast<std::size_t>(w) * h);
    for (unsigned j = 0; j < h; ++j) {
        double* out = f.intensity.data() + static_cast<std::size_t>(j) * w;
        for (unsigned i = 0; i < w; ++i) {
            cplx field = cols[0][i] * rows[0][j];
            for (unsigned k = 1; k < kHoles; ++k) field += cols[k][i] * rows[k][j];
            out[i] = std::norm(field);
        }
    }
    return f;
}

Frame render_frame(HoleBits phases, HoleBits mask, const HoleGeometry& geom) {
    std::array<double, kHoles> amps{};
    for (unsigned k = 0; k < kHoles; ++k) amps[k] = mask[k] ? 1.0 : 0.0;
    return render_frame(phases, amps, geom);
}

unsigned frames_per_group(unsigned group_size) noexcept {
    return (group_size + kHoles - 1) / kHoles;
}

namespace {

std::vector<Frame> render_groups(const sim::Network& net, const HoleGeometry& geom,
                                 const std::array<sim::Polarization, kHoles>* hole_axes) {
    const unsigned n = net.config().group_size;
    const double nominal = net.config().amplitude;
    const unsigned per_group = frames_per_group(n);
    std::vector<Frame> video;
    video.reserve(net.group_count() * per_group);
    for (u64 g = 0; g < net.group_count(); ++g) {
        const auto pulses = net.group(g);
        for (unsigned s = 0; s < per_group; ++s) {
            HoleBits phases;
            std::array<double, kHoles> amps{};
            unsigned data = 0;
            for (unsigned k = 0; k < kHoles; ++k) {
                const unsigned slot = s * kHoles + k;
                if (slot < n) {
                    const sim::Pulse& p = pulses[slot];
                    ++data;
                    const bool passes = hole_axes == nullptr || p.polarization == (*hole_axes)[k];
                    if (p.alive && passes) {
                        amps[k] = std::abs(p.c) / nominal;
                        phases.set(k, p.c < 0.0);
                    }
                } else {
                    amps[k] = 1.0;  // reference hole, phase 0
                }
            }
            Frame f = render_frame(phases, amps, geom);
            f.group = g;
            f.subframe = s;
            f.data_slots = data;
            video.push_back(std::move(f));
        }
    }
    return video;
}

}  // namespace

std::vector<Frame> render_video(const sim::Network& net, const HoleGeometry& geom) {
    return render_groups(net, geom, nullptr);
}

std::vector<Frame> render_video(const sim::Network& net, const HoleGeometry& geom,
                                const std::array<sim::Polarization, kHoles>& hole_axes) {
    return render_groups(net, geom, &hole_axes);
}

void add_pixel_noise(Frame& frame, double snr_db, std::mt19937_64& rng) {
    double power = 0.0;
    for (double v : frame.intensity) power += v * v;
    power /= static_cast<double>(std::max<std::size_t>(frame.intensity.size(), 1));
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
    if (sigma == 0.0) return;
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& v : frame.intensity) v = std::max(0.0, v + noise(rng));
}

unsigned estimate_hole_count(const Frame& frame, const HoleGeometry& geom) {
    if (frame.width != geom.width || frame.height != geom.height)
        throw DomainError("frame does not match the geometry grid");
    const double ratio = frame.mean() / frame.normalization;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) > 0.25 || nearest > kHoles || nearest < 0.0)
        throw DegradedFrameError("integrated intensity " + std::to_string(ratio) +
                                 " single-hole units is not a hole count");
    return static_cast<unsigned>(nearest);
}

HoleBits canonical_phases(HoleBits phases, HoleBits mask) noexcept {
    HoleBits out{static_cast<std::uint8_t>(phases.value & mask.value)};
    for (unsigned k = 0; k < kHoles; ++k) {
        if (mask[k]) {
            if (out[k]) out = HoleBits{static_cast<std::uint8_t>((out.value ^ 0xF) & mask.value)};
            break;
        }
    }
    return out;
}

bool Classification::contains(HoleBits candidate) const noexcept {
    return canonical_phases(candidate, mask) == phases;
}

namespace {

// Zero-mean, unit-norm copy; empty if the input has no variance.
std::vector<double> normalized(const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    std::vector<double> out(v.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i] - mean;
        norm += out[i] * out[i];
    }
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) return {};
    for (double& x : out) x /= norm;
    return out;
}

constexpr char kBankMagic[8] = {'D', 'O', 'P', 'O', 'T', 'B', '0', '1'};

}  // namespace

TemplateBank TemplateBank::build(const HoleGeometry& geom) {
    geom.validate();
    TemplateBank bank;
    bank.hash_ = geom.hash();
    bank.width_ = geom.width;
    bank.height_ = geom.height;
    for (std::uint8_t m = 1; m < 16; ++m) {
        const HoleBits mask{m};
        if (mask.count() < 2) continue;
        std::vector<HoleBits> seen;
        for (std::uint8_t p = 0; p < 16; ++p) {
            const HoleBits phases = canonical_phases(HoleBits{p}, mask);
            if (std::find(seen.begin(), seen.end(), phases) != seen.end()) continue;
            seen.push_back(phases);
            Frame f = render_frame(phases, mask, geom);
            bank.entries_.push_back({mask, phases, normalized(f.intensity)});
        }
    }
    return bank;
}

void TemplateBank::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write template bank " + path.string());
    const auto count = static_cast<std::uint32_t>(entries_.size());
    out.write(kBankMagic, sizeof kBankMagic);
    out.write(reinterpret_cast<const char*>(&hash_), sizeof hash_);
    out.write(reinterpret_cast<const char*>(&width_), sizeof width_);
    out.write(reinterpret_cast<const char*>(&height_), sizeof height_);
    out.write(reinterpret_cast<const char*>(&count), sizeof count);
    for (const Entry& e : entries_) {
        out.put(static_cast<char>(e.mask.value));
        out.put(static_cast<char>(e.phases.value));
        out.write(reinterpret_cast<const char*>(e.pattern.data()),
                  static_cast<std::streamsize>(e.pattern.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("short write on template bank " + path.string());
}

std::optional<TemplateBank> TemplateBank::load(const std::filesystem::path& path,
                                               const HoleGeometry& geom) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    char magic[sizeof kBankMagic];
    TemplateBank bank;
    std::uint32_t count = 0;
    in.read(magic, sizeof magic);
    in.read(reinterpret_cast<char*>(&bank.hash_), sizeof bank.hash_);
    in.read(reinterpret_cast<char*>(&bank.width_), sizeof bank.width_);
    in.read(reinterpret_cast<char*>(&bank.height_), sizeof bank.height_);
    in.read(reinterpret_cast<char*>(&count), sizeof count);
    if (!in || std::memcmp(magic, kBankMagic, sizeof magic) != 0) return std::nullopt;
    if (bank.hash_ != geom.hash() || bank.width_ != geom.width || bank.height_ != geom.height)
        return std::nullopt;
    if (count > 256) return std::nullopt;
    const std::size_t pixels = static_cast<std::size_t>(bank.width_) * bank.height_;
    for (std::uint32_t i = 0; i < count; ++i) {
        Entry e;
        char mask = 0, phases = 0;
        in.get(mask);
        in.get(phases);
        e.mask = HoleBits{static_cast<std::uint8_t>(mask)};
        e.phases = HoleBits{static_cast<std::uint8_t>(phases)};
        e.pattern.resize(pixels);
        in.read(reinterpret_cast<char*>(e.pattern.data()),
                static_cast<std::streamsize>(pixels * sizeof(double)));
        if (!in) return std::nullopt;
        bank.entries_.push_back(std::move(e));
    }
    if (in.peek() != std::char_traits<char>::eof()) return std::nullopt;
    return bank;
}

TemplateBank TemplateBank::load_or_build(const std::filesystem::path& path,
                                         const HoleGeometry& geom) {
    if (auto cached = load(path, geom)) return std::move(*cached);
    TemplateBank bank = build(geom);
    bank.save(path);
    return bank;
}

Match match_frame(const Frame& frame, const TemplateBank& bank, const MatchOptions& opts) {
    if (frame.width != bank.width() || frame.height != bank.height())
        throw DomainError("frame does not match the template bank grid");
    Match m;
    const double mean = frame.mean();
    if (mean < opts.dark * frame.normalization) {
        m.status = MatchStatus::Empty;
        m.result = {HoleBits{}, HoleBits{}, 1.0};
        return m;
    }
    double var = 0.0;
    for (double v : frame.intensity) var += (v - mean) * (v - mean);
    var /= static_cast<double>(frame.intensity.size());
    if (var / (mean * mean) < opts.flat) {
        m.status = MatchStatus::SingleHole;
        return m;
    }

    const std::vector<double> probe = normalized(frame.intensity);
    double best = -2.0, second = -2.0;
    const TemplateBank::Entry* winner = nullptr;
    for (const auto& e : bank.entries()) {
        const double score = std::inner_product(probe.begin(), probe.end(), e.pattern.begin(), 0.0);
        if (score > best) {
            second = best;
            best = score;
            winner = &e;
        } else if (score > second) {
            second = score;
        }
    }
    m.result = {winner->phases, winner->mask, best};
    m.runner_up = second;
    if (best - second < opts.tie_margin) {
        m.status = MatchStatus::Tie;
    } else if (best < opts.accept) {
        m.status = MatchStatus::LowScore;
    }
    return m;
}

Classification classify_frame(const Frame& frame, const TemplateBank& bank,
                              const MatchOptions& opts) {
    const Match m = match_frame(frame, bank, opts);
    switch (m.status) {
        case MatchStatus::Ok:
        case MatchStatus::Empty:
            return m.result;
        case MatchStatus::SingleHole:
            throw UnclassifiableFrameError(
                "single lit hole: its position leaves no trace in the far field");
        case MatchStatus::Tie:
            throw UnclassifiableFrameError("tie between non-equivalent classes (score " +
                                           std::to_string(m.result.score) + ")");
        case MatchStatus::LowScore:
            throw UnclassifiableFrameError("best template score " +
                                           std::to_string(m.result.score) + " below " +
                                           std::to_string(opts.accept));
    }
    throw std::logic_error("unreachable");
}

Classification classify_frame(const Frame& frame, const HoleGeometry& geom,
                              const MatchOptions& opts) {
    return classify_frame(frame, TemplateBank::build(geom), opts);
}

std::vector<DecodedGroup> decode_group_value(const std::vector<Frame>& frames,
                                             const TemplateBank& bank, const MatchOptions& opts) {
    std::map<u64, std::vector<const Frame*>> groups;
    for (const Frame& f : frames) groups[f.group].push_back(&f);
    for (auto& [g, list] : groups) {
        std::sort(list.begin(), list.end(),
                  [](const Frame* a, const Frame* b) { return a->subframe < b->subframe; });
    }

    auto anchor = groups.find(0);
    if (anchor == groups.end()) throw DecodeAnchorError("video has no frame for group 0");

    std::vector<DecodedGroup> out;
    for (const auto& [g, list] : groups) {
        unsigned n = 0;
        for (const Frame* f : list) n += f->data_slots;

        std::vector<Classification> classes;
        bool intact = true;
        for (const Frame* f : list) {
            const Match m = match_frame(*f, bank, opts);
            if (m.status != MatchStatus::Ok || m.result.mask != HoleBits::all()) {
                intact = false;
                break;
            }
            classes.push_back(m.result);
        }
        if (!intact) {
            if (g == 0) throw DecodeAnchorError("group 0 is not intact; no decode reference");
            continue;
        }

        u64 value = 0;
        for (std::size_t s = 0; s < list.size(); ++s) {
            const Frame& f = *list[s];
            // Scheduled bits for this sub-frame, padding holes fixed at 0.
            HoleBits expected;
            for (unsigned k = 0; k < f.data_slots; ++k) {
                const unsigned bit = n - 1 - (f.subframe * kHoles + k);
                expected.set(k, ((g >> bit) & 1U) != 0);
            }
            if (g == 0 && classes[s].phases != HoleBits{})
                throw DecodeAnchorError("group 0 does not decode as all-zero phases");
            if (!classes[s].contains(expected))
                throw ConsistencyError("group " + std::to_string(g) + " frame " +
                                       std::to_string(f.subframe) + " decodes to class " +
                                       classes[s].phases.str() + ", which cannot hold " +
                                       expected.str());
            // Representative with the anchored orientation.
            const HoleBits chosen = classes[s].phases[0] == expected[0]
                                        ? classes[s].phases
                                        : classes[s].phases.flipped();
            for (unsigned k = 0; k < f.data_slots; ++k) value = (value << 1) | (chosen[k] ? 1U : 0U);
        }
        out.push_back({g, value});
    }
    return out;
}

std::vector<DecodedGroup> decode_group_value(const std::vector<Frame>& frames,
                                             const HoleGeometry& geom, const MatchOptions& opts) {
    return decode_group_value(frames, TemplateBank::build(geom), opts);
}

}  // namespace dopo::optics
