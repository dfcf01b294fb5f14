#include "dopo_shor/errors.hpp"
#include "dopo_shor/network.hpp"
#include "dopo_shor/numtheory.hpp"
#include "dopo_shor/optics.hpp"
#include "dopo_shor/pgm.hpp"
#include "dopo_shor/pipeline.hpp"
#include "dopo_shor/register_state.hpp"
#include "dopo_shor/report.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using u64 = std::uint64_t;

namespace {

py::array_t<double> frame_array(const dopo::optics::Frame& f) {
    py::array_t<double> out({f.height, f.width});
    std::copy(f.intensity.begin(), f.intensity.end(), out.mutable_data());
    return out;
}

dopo::optics::Frame array_frame(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw dopo::DomainError("frame must be a 2-D array");
    dopo::optics::Frame f;
    f.height = static_cast<unsigned>(a.shape(0));
    f.width = static_cast<unsigned>(a.shape(1));
    f.intensity.assign(a.data(), a.data() + a.size());
    return f;
}

dopo::optics::HoleGeometry geometry(const std::string& layout, double pitch, double distance,
                                    unsigned width, unsigned height) {
    using dopo::optics::HoleGeometry;
    if (layout == "trapezoid") return HoleGeometry::trapezoid(pitch, distance, width, height);
    if (layout == "square") return HoleGeometry::square(pitch, distance, width, height);
    throw dopo::DomainError("layout must be 'trapezoid' or 'square'");
}

py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Semi-classical optical Shor factoring simulator";

    py::register_exception<dopo::NotCoprimeError>(m, "NotCoprimeError", PyExc_ValueError);
    py::register_exception<dopo::NoSurvivorsError>(m, "NoSurvivorsError");
    py::register_exception<dopo::AmbiguousReadoutError>(m, "AmbiguousReadoutError");
    py::register_exception<dopo::UnclassifiableFrameError>(m, "UnclassifiableFrameError");
    py::register_exception<dopo::DegradedFrameError>(m, "DegradedFrameError");
    py::register_exception<dopo::DecodeAnchorError>(m, "DecodeAnchorError");
    py::register_exception<dopo::OrderOutOfRangeError>(m, "OrderOutOfRangeError");
    py::register_exception<dopo::ConsistencyError>(m, "ConsistencyError");

    namespace nt = dopo::numtheory;
    m.def("gcd", &nt::gcd, py::arg("a"), py::arg("b"));
    m.def("ext_gcd", [](u64 a, u64 b) {
        const auto e = nt::ext_gcd(a, b);
        return py::make_tuple(e.g, e.s, e.t);
    }, py::arg("a"), py::arg("b"), "Returns (g, s, t) with a*s + b*t = g.");
    m.def("mont_setup", [](u64 n) {
        const nt::MontCtx c{n};
        return py::dict(py::arg("modulus") = c.modulus(), py::arg("r") = c.r(),
                        py::arg("r_inv") = c.r_inv(), py::arg("n_prime") = c.n_prime());
    }, py::arg("modulus"));
    m.def("mont_mul", [](u64 t1, u64 t2, u64 n) { return nt::mont_mul(t1, t2, nt::MontCtx{n}); },
          py::arg("t1"), py::arg("t2"), py::arg("modulus"));
    m.def("mod_exp", py::overload_cast<u64, u64, u64>(&nt::mod_exp), py::arg("a"), py::arg("x"),
          py::arg("modulus"));
    m.def("multiplicative_order", &nt::multiplicative_order, py::arg("a"), py::arg("modulus"));

    namespace reg = dopo::registers;
    m.def("register_state", [](u64 n_mod, u64 a, std::optional<unsigned> bits, bool apply) {
        const auto cfg = reg::RegisterConfig::make(n_mod, a, bits);
        auto state = reg::initial_state(cfg);
        if (apply) state = reg::apply_mef(state, cfg);
        return to_python(dopo::report::to_json(state));
    }, py::arg("modulus"), py::arg("a"), py::arg("bits") = py::none(), py::arg("apply_mef") = true);
    m.def("schmidt_number", [](u64 n_mod, u64 a, std::optional<unsigned> bits) {
        const auto cfg = reg::RegisterConfig::make(n_mod, a, bits);
        return reg::schmidt_number(reg::apply_mef(reg::initial_state(cfg), cfg));
    }, py::arg("modulus"), py::arg("a"), py::arg("bits") = py::none());
    m.def("survivors", [](u64 n_mod, u64 a, std::optional<unsigned> bits) {
        const auto cfg = reg::RegisterConfig::make(n_mod, a, bits);
        return reg::project_work(reg::apply_mef(reg::initial_state(cfg), cfg), 0).control_values();
    }, py::arg("modulus"), py::arg("a"), py::arg("bits") = py::none());

    namespace sim = dopo::sim;
    m.def("prepared_network", [](unsigned bits, u64 n_mod, u64 a, double sigma, u64 seed,
                                 bool polarize) {
        const auto cfg = sim::NetworkConfig::full_basis(bits, 1.0, sigma, seed);
        auto net = sim::prepare_basis(sim::init_network(cfg), sim::basis_targets(cfg));
        net = sim::write_mef(net, n_mod, a);
        if (polarize) net = sim::apply_polarizer(net, sim::Polarization::H);
        return to_python(dopo::report::to_json(net));
    }, py::arg("bits"), py::arg("modulus"), py::arg("a"), py::arg("sigma") = 0.0,
       py::arg("seed") = 0, py::arg("polarize") = true);

    namespace op = dopo::optics;
    m.def("render_frame", [](const std::string& phases, const std::string& mask,
                             const std::string& layout, double pitch, double distance,
                             unsigned width, unsigned height) {
        const auto g = geometry(layout, pitch, distance, width, height);
        return frame_array(op::render_frame(op::HoleBits::parse(phases), op::HoleBits::parse(mask), g));
    }, py::arg("phases"), py::arg("mask") = "1111", py::arg("layout") = "trapezoid",
       py::arg("pitch") = 100e-6, py::arg("distance") = 1.0, py::arg("width") = 256,
       py::arg("height") = 256);
    m.def("classify_frame", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
                               const std::string& layout, double pitch, double distance) {
        const op::Frame f = array_frame(a);
        const auto g = geometry(layout, pitch, distance, f.width, f.height);
        const auto c = op::classify_frame(f, g);
        return py::dict(py::arg("phases") = c.phases.str(), py::arg("mask") = c.mask.str(),
                        py::arg("score") = c.score);
    }, py::arg("frame"), py::arg("layout") = "trapezoid", py::arg("pitch") = 100e-6,
       py::arg("distance") = 1.0);
    m.def("write_pgm16", [](const std::filesystem::path& path,
                            const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
        return op::write_pgm16(path, array_frame(a));
    }, py::arg("path"), py::arg("frame"), "Writes a 16-bit P5 PGM and returns the scale used.");

    namespace pl = dopo::pipeline;
    m.def("factor", [](u64 n_value, std::optional<u64> a, const std::string& mode,
                       std::optional<unsigned> bits, u64 seed, double sigma,
                       std::optional<std::filesystem::path> out_dir, bool frames, unsigned retries,
                       unsigned grid) {
        pl::RunOptions o;
        o.modulus = n_value;
        o.base = a;
        o.mode = pl::parse_mode(mode);
        o.bits = bits;
        o.seed = seed;
        o.sigma = sigma;
        o.out_dir = out_dir;
        o.export_frames = frames;
        o.retries = retries;
        o.grid_width = grid;
        o.grid_height = grid;
        pl::FactorReport r;
        {
            py::gil_scoped_release release;
            r = pl::factor(o);
        }
        return to_python(dopo::report::to_json(r));
    }, py::arg("n"), py::arg("a") = py::none(), py::arg("mode") = "exact",
       py::arg("bits") = py::none(), py::arg("seed") = 0, py::arg("sigma") = 0.0,
       py::arg("out_dir") = py::none(), py::arg("frames") = false, py::arg("retries") = 16,
       py::arg("grid") = 256, "Runs the factoring pipeline and returns the report as a dict.");
}
