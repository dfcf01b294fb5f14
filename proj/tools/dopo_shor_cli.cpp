// dopo-shor: factor / order / render front end.

#include "dopo_shor/errors.hpp"
#include "dopo_shor/numtheory.hpp"
#include "dopo_shor/optics.hpp"
#include "dopo_shor/pgm.hpp"
#include "dopo_shor/pipeline.hpp"
#include "dopo_shor/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <regex>

namespace {

constexpr int kInvalidInput = 2;

struct Grid {
    unsigned width = 256;
    unsigned height = 256;
};

Grid parse_grid(const std::string& text) {
    static const std::regex pattern(R"((\d+)[xX](\d+))");
    std::smatch m;
    if (!std::regex_match(text, m, pattern))
        throw dopo::DomainError("grid must look like 256x256, got '" + text + "'");
    return {static_cast<unsigned>(std::stoul(m[1])), static_cast<unsigned>(std::stoul(m[2]))};
}

struct GeometryFlags {
    double pitch = 100e-6;
    double distance = 1.0;
    std::string grid = "256x256";

    void add_to(CLI::App& app) {
        app.add_option("--pitch", pitch, "Hole pitch d in metres")->capture_default_str();
        app.add_option("--distance", distance, "Screen distance L in metres")->capture_default_str();
        app.add_option("--grid", grid, "Screen grid WxH in pixels")->capture_default_str();
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-classical optical Shor factoring simulator"};
    app.require_subcommand(1);

    // factor
    auto* factor_cmd = app.add_subcommand("factor", "Factor an odd composite N");
    std::uint64_t n_value = 0;
    std::uint64_t base = 0;
    std::string mode = "exact";
    unsigned bits = 0;
    std::uint64_t seed = 0;
    double sigma = 0.0;
    std::string out_dir;
    bool frames = false;
    unsigned retries = 16;
    GeometryFlags factor_geom;
    factor_cmd->add_option("--n", n_value, "Integer to factor")->required();
    auto* base_opt = factor_cmd->add_option("--a", base, "Base (drawn at random when absent)");
    factor_cmd->add_option("--mode", mode, "exact | sim")
        ->check(CLI::IsMember({"exact", "sim"}))
        ->capture_default_str();
    auto* bits_opt = factor_cmd->add_option("--bits", bits, "Control register width n");
    factor_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    factor_cmd->add_option("--sigma", sigma, "Start-up amplitude noise (units of A)")
        ->capture_default_str();
    factor_cmd->add_option("--out", out_dir, "Output directory for report.json and frames");
    factor_cmd->add_flag("--frames", frames, "Export fringe frames as 16-bit PGM");
    factor_cmd->add_option("--retries", retries, "Base draws before giving up")->capture_default_str();
    factor_geom.add_to(*factor_cmd);

    // order
    auto* order_cmd = app.add_subcommand("order", "Multiplicative order of a mod N (brute force)");
    std::uint64_t order_n = 0;
    std::uint64_t order_a = 0;
    order_cmd->add_option("--n", order_n, "Modulus")->required();
    order_cmd->add_option("--a", order_a, "Base")->required();

    // render
    auto* render_cmd = app.add_subcommand("render", "Render one four-hole frame");
    std::string phases_text;
    std::string mask_text = "1111";
    std::string render_out = "frame.pgm";
    std::string layout = "trapezoid";
    GeometryFlags render_geom;
    render_cmd->add_option("--phases", phases_text, "Four phase bits, slot 0 first (1 = pi)")
        ->required();
    render_cmd->add_option("--mask", mask_text, "Four live-hole bits")->capture_default_str();
    render_cmd->add_option("--out", render_out, "Output PGM path")->capture_default_str();
    render_cmd->add_option("--layout", layout, "trapezoid | square")
        ->check(CLI::IsMember({"trapezoid", "square"}))
        ->capture_default_str();
    render_geom.add_to(*render_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInvalidInput;
    }

    namespace pl = dopo::pipeline;
    try {
        if (*factor_cmd) {
            pl::RunOptions opts;
            opts.modulus = n_value;
            if (*base_opt) opts.base = base;
            opts.mode = pl::parse_mode(mode);
            if (*bits_opt) opts.bits = bits;
            opts.seed = seed;
            opts.sigma = sigma;
            opts.pitch = factor_geom.pitch;
            opts.distance = factor_geom.distance;
            const Grid grid = parse_grid(factor_geom.grid);
            opts.grid_width = grid.width;
            opts.grid_height = grid.height;
            if (!out_dir.empty()) opts.out_dir = out_dir;
            opts.export_frames = frames;
            opts.retries = retries;

            const pl::FactorReport report = pl::factor(opts);
            const std::string text = dopo::report::to_json(report).dump(2);
            std::cout << text << '\n';
            if (opts.out_dir) {
                std::filesystem::create_directories(*opts.out_dir);
                std::ofstream(*opts.out_dir / "report.json") << text << '\n';
            }
            if (report.status != pl::Status::Success && report.status != pl::Status::LuckyFactor)
                std::cerr << "dopo-shor: " << pl::to_string(report.status) << ": " << report.message
                          << '\n';
            return pl::exit_code(report.status);
        }

        if (*order_cmd) {
            std::cout << dopo::numtheory::multiplicative_order(order_a, order_n) << '\n';
            return 0;
        }

        if (*render_cmd) {
            using namespace dopo::optics;
            const Grid grid = parse_grid(render_geom.grid);
            const HoleGeometry geom =
                layout == "square"
                    ? HoleGeometry::square(render_geom.pitch, render_geom.distance, grid.width, grid.height)
                    : HoleGeometry::trapezoid(render_geom.pitch, render_geom.distance, grid.width,
                                              grid.height);
            const HoleBits phases = HoleBits::parse(phases_text);
            const HoleBits mask = HoleBits::parse(mask_text);
            const Frame frame = render_frame(phases, mask, geom);
            const double scale = write_pgm16(render_out, frame);

            nlohmann::json j;
            j["file"] = render_out;
            j["phases"] = phases.str();
            j["mask"] = mask.str();
            j["scale"] = scale;
            j["layout"] = layout;
            j["holes"] = estimate_hole_count(frame, geom);
            const Match m = match_frame(frame, TemplateBank::build(geom));
            j["class"] = m.status == MatchStatus::Ok || m.status == MatchStatus::Empty
                             ? nlohmann::json(m.result.phases.str())
                             : nlohmann::json(nullptr);
            j["score"] = m.result.score;
            std::cout << j.dump(2) << '\n';
            return 0;
        }
    } catch (const dopo::DomainError& e) {
        std::cerr << "dopo-shor: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "dopo-shor: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
