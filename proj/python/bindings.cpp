#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "beamtrack/analytic.hpp"
#include "beamtrack/calibration.hpp"
#include "beamtrack/crlb.hpp"
#include "beamtrack/detection.hpp"
#include "beamtrack/opt_estimators.hpp"
#include "beamtrack/runner.hpp"
#include "beamtrack/special.hpp"
#include "beamtrack/version.hpp"

namespace py = pybind11;
using namespace beamtrack;

namespace {

CountFrame frame_from_counts(const std::vector<std::int64_t>& counts, SlotKind kind) {
    return CountFrame{counts, kind};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Photon-counting detector-array beam tracking core";
    m.attr("__version__") = kVersion;

    py::class_<ArrayGeometry>(m, "ArrayGeometry")
        .def(py::init<double, int>(), py::arg("half_width"), py::arg("cells_per_side"))
        .def_property_readonly("half_width", &ArrayGeometry::half_width)
        .def_property_readonly("cells_per_side", &ArrayGeometry::cells_per_side)
        .def_property_readonly("cell_count", &ArrayGeometry::cell_count)
        .def_property_readonly("cell_side", &ArrayGeometry::cell_side)
        .def_property_readonly("cell_area", &ArrayGeometry::cell_area)
        .def_property_readonly("array_area", &ArrayGeometry::array_area)
        .def("cell_center_x", &ArrayGeometry::cell_center_x)
        .def("cell_center_y", &ArrayGeometry::cell_center_y)
        .def("cell_bounds", [](const ArrayGeometry& g, int m) {
            const CellBounds b = g.cell_bounds(m);
            return py::make_tuple(b.x_lo, b.x_hi, b.y_lo, b.y_hi);
        });

    py::class_<BeamParams>(m, "BeamParams")
        .def(py::init([](double I0, double rho, double x0, double y0, double lambda_n) {
                 BeamParams b{I0, rho, x0, y0, lambda_n};
                 b.validate();
                 return b;
             }),
             py::arg("I0"), py::arg("rho"), py::arg("x0") = 0.0, py::arg("y0") = 0.0,
             py::arg("lambda_n") = 0.0)
        .def_readwrite("I0", &BeamParams::I0)
        .def_readwrite("rho", &BeamParams::rho)
        .def_readwrite("x0", &BeamParams::x0)
        .def_readwrite("y0", &BeamParams::y0)
        .def_readwrite("lambda_n", &BeamParams::lambda_n)
        .def("with_center", &BeamParams::with_center);

    m.def("std_normal_cdf", &std_normal_cdf, py::arg("x"));
    m.def("spot_size", &spot_size, py::arg("rho0"), py::arg("wavelength"), py::arg("d"));
    m.def("intensity_at", &intensity_at, py::arg("beam"), py::arg("x"), py::arg("y"));
    m.def(
        "scaled_intensity_from_power",
        [](double rho0, double wavelength, double distance, double slot_seconds,
           double efficiency, double power_watts) {
            return scaled_intensity_from_power(
                LinkBudget{rho0, wavelength, distance, slot_seconds, efficiency},
                power_watts);
        },
        py::arg("rho0"), py::arg("wavelength"), py::arg("distance"),
        py::arg("slot_seconds"), py::arg("efficiency"), py::arg("power_watts"));

    m.def("cell_mean_count", &cell_mean_count, py::arg("beam"), py::arg("geom"),
          py::arg("m"));
    m.def("cell_means", &cell_means, py::arg("beam"), py::arg("geom"));
    m.def("total_mean_count", &total_mean_count, py::arg("beam"), py::arg("geom"));
    m.def("cell_snr", &cell_snr, py::arg("beam"), py::arg("geom"), py::arg("m"));

    m.def(
        "sample_frame",
        [](const BeamParams& beam, const ArrayGeometry& geom, bool noise_only,
           std::uint64_t seed, std::uint64_t trial) {
            RngStream s(seed,
                        {noise_only ? stream_tag::kNoiseFrame : stream_tag::kSignalFrame,
                         trial});
            return sample_frame(
                       beam, geom,
                       noise_only ? SlotKind::noise_only : SlotKind::signal_plus_noise, s)
                .counts;
        },
        py::arg("beam"), py::arg("geom"), py::arg("noise_only"), py::arg("seed"),
        py::arg("trial") = 0);

    py::class_<PositionEstimate>(m, "PositionEstimate")
        .def_readonly("x", &PositionEstimate::x)
        .def_readonly("y", &PositionEstimate::y)
        .def_readonly("degenerate", &PositionEstimate::degenerate)
        .def_property_readonly("estimator",
                               [](const PositionEstimate& e) { return to_string(e.tag); })
        .def("__repr__", [](const PositionEstimate& e) {
            return "PositionEstimate(" + to_string(e.tag) + ", x=" + std::to_string(e.x) +
                   ", y=" + std::to_string(e.y) + ")";
        });

    m.def(
        "estimate_mdc",
        [](const std::vector<std::int64_t>& counts, const ArrayGeometry& geom,
           std::uint64_t seed) {
            RngStream s(seed, {stream_tag::kTieBreak});
            return estimate_mdc(frame_from_counts(counts, SlotKind::signal_plus_noise),
                                geom, s);
        },
        py::arg("counts"), py::arg("geom"), py::arg("seed") = 0);
    m.def(
        "estimate_centroid",
        [](const std::vector<std::int64_t>& counts, const ArrayGeometry& geom) {
            return estimate_centroid(frame_from_counts(counts, SlotKind::signal_plus_noise),
                                     geom);
        },
        py::arg("counts"), py::arg("geom"));
    m.def(
        "estimate_auc",
        [](const std::vector<std::int64_t>& counts, const ArrayGeometry& geom,
           const BeamParams& scale) {
            return estimate_auc(frame_from_counts(counts, SlotKind::signal_plus_noise),
                                geom, scale);
        },
        py::arg("counts"), py::arg("geom"), py::arg("scale"));
    m.def(
        "estimate_ace1",
        [](const std::vector<std::int64_t>& counts, const ArrayGeometry& geom, double n) {
            return estimate_ace1(frame_from_counts(counts, SlotKind::signal_plus_noise),
                                 geom, AceParams{n, 0});
        },
        py::arg("counts"), py::arg("geom"), py::arg("n") = 2.0);
    m.def(
        "estimate_ace2",
        [](const std::vector<std::int64_t>& counts, const ArrayGeometry& geom, double n,
           int n_top) {
            return estimate_ace2(frame_from_counts(counts, SlotKind::signal_plus_noise),
                                 geom, AceParams{n, n_top});
        },
        py::arg("counts"), py::arg("geom"), py::arg("n") = 2.0, py::arg("n_top") = 3);
    m.def(
        "estimate_nls",
        [](const std::vector<std::int64_t>& counts, const BeamParams& scale,
           const ArrayGeometry& geom, std::uint64_t seed) {
            RngStream s(seed, {stream_tag::kGa});
            GaConfig ga;
            ga.mutation_sigma = 0.0;
            return estimate_nls(frame_from_counts(counts, SlotKind::signal_plus_noise),
                                scale, geom, ga, s);
        },
        py::arg("counts"), py::arg("scale"), py::arg("geom"), py::arg("seed") = 0);
    m.def(
        "estimate_mle",
        [](const std::vector<std::int64_t>& counts, const BeamParams& scale,
           const ArrayGeometry& geom, std::uint64_t seed) {
            RngStream s(seed, {stream_tag::kGa});
            GaConfig ga;
            ga.mutation_sigma = 0.0;
            return estimate_mle(frame_from_counts(counts, SlotKind::signal_plus_noise),
                                scale, geom, ga, s);
        },
        py::arg("counts"), py::arg("scale"), py::arg("geom"), py::arg("seed") = 0);

    py::class_<FisherMatrix>(m, "FisherMatrix")
        .def_readonly("i_xx", &FisherMatrix::i_xx)
        .def_readonly("i_yy", &FisherMatrix::i_yy)
        .def_readonly("i_xy", &FisherMatrix::i_xy);
    py::class_<CrlbResult>(m, "CrlbResult")
        .def_readonly("var_x_lb", &CrlbResult::var_x_lb)
        .def_readonly("var_y_lb", &CrlbResult::var_y_lb);
    m.def("fisher_matrix", &fisher_matrix, py::arg("beam"), py::arg("geom"));
    m.def("crlb", &crlb, py::arg("beam"), py::arg("geom"));

    m.def(
        "mdc_mse_bias",
        [](const BeamParams& beam, const ArrayGeometry& geom, double epsilon0, int k_max) {
            const MdcAnalytic a = mdc_mse_bias(beam, geom, TruncationPolicy{epsilon0, k_max});
            return py::make_tuple(a.mse, a.bias_x, a.bias_y);
        },
        py::arg("beam"), py::arg("geom"), py::arg("epsilon0") = 1e-5,
        py::arg("k_max") = 2);
    m.def(
        "centroid_mse_bias",
        [](const BeamParams& beam, const ArrayGeometry& geom, bool scaled_by_K,
           double epsilon0) {
            const CentroidAnalytic a =
                centroid_mse_bias(beam, geom, TruncationPolicy{epsilon0, 2}, scaled_by_K);
            return py::make_tuple(a.mse, a.bias_x, a.bias_y);
        },
        py::arg("beam"), py::arg("geom"), py::arg("scaled_by_K") = false,
        py::arg("epsilon0") = 1e-5);

    m.def(
        "symbol_error_gaussian",
        [](const BeamParams& beam_true, const BeamParams& assumed,
           const ArrayGeometry& geom, int order) {
            const ErrorProbResult r = symbol_error_gaussian(beam_true, assumed, geom, order);
            return py::make_tuple(r.p_symbol_error, r.mu_v, r.sigma_v);
        },
        py::arg("beam_true"), py::arg("assumed"), py::arg("geom"), py::arg("order"));

    m.def(
        "run_config",
        [](const std::string& text, int threads) {
            auto parsed = parse_config(text);
            if (!parsed.errors.empty()) {
                std::string msg = "config errors:";
                for (const auto& e : parsed.errors)
                    msg += "\n  line " + std::to_string(e.line) + ": " + e.message;
                throw std::invalid_argument(msg);
            }
            RunOptions options;
            options.threads = threads;
            const SweepResult result = run_experiment(*parsed.config, options);
            py::list rows;
            for (const auto& r : result.rows)
                rows.append(py::make_tuple(r.sweep, r.estimator, r.metric, r.value,
                                           r.stderr_est, r.trials, r.degenerate));
            return rows;
        },
        py::arg("config_text"), py::arg("threads") = 1,
        "Parse a config string, run it, and return the result rows");
}
