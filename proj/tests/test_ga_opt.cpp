#include <doctest.h>

#include <cmath>
#include <vector>

#include "beamtrack/crlb.hpp"
#include "beamtrack/opt_estimators.hpp"

using namespace beamtrack;

namespace {

CountFrame synthetic_frame(const BeamParams& beam, const ArrayGeometry& geom) {
    CountFrame f;
    f.kind = SlotKind::signal_plus_noise;
    const std::vector<double> lams = cell_means(beam, geom);
    for (double lam : lams) f.counts.push_back(std::llround(lam));
    return f;
}

}  // namespace

TEST_SUITE("ga_opt") {

TEST_CASE("nls objective is minimal near the true center") {
    const ArrayGeometry geom(1.0, 4);
    const BeamParams beam{50.0, 0.2, 0.15, 0.15, 1.0};
    const CountFrame f = synthetic_frame(beam, geom);
    const double at_truth = nls_objective(beam.x0, beam.y0, f.counts, beam, geom);
    for (int ix = 0; ix <= 20; ++ix)
        for (int iy = 0; iy <= 20; ++iy) {
            const double x = -1.0 + 0.1 * ix;
            const double y = -1.0 + 0.1 * iy;
            CHECK(at_truth <= nls_objective(x, y, f.counts, beam, geom) + 1e-9);
        }
}

TEST_CASE("nls objective degenerate cases") {
    const ArrayGeometry geom(1.0, 4);
    BeamParams dark{0.0, 0.2, 0.0, 0.0, 0.0};
    CountFrame zero;
    zero.counts.assign(16, 0);
    CHECK(nls_objective(0.3, -0.7, zero.counts, dark, geom) == 0.0);

    BeamParams beam{10.0, 0.2, 0.0, 0.0, 0.0};
    CountFrame single;
    single.counts.assign(16, 0);
    single.counts[5] = 40;
    const double near = nls_objective(geom.cell_center_x(5), geom.cell_center_y(5),
                                      single.counts, beam, geom);
    const double far = nls_objective(0.9, 0.9, single.counts, beam, geom);
    CHECK(far > near);
}

TEST_CASE("mle objective is flat when no signal is expected") {
    const ArrayGeometry geom(1.0, 4);
    const BeamParams beam{0.0, 0.2, 0.0, 0.0, 1.5};
    CountFrame f;
    f.counts.assign(16, 2);
    const double ref = mle_objective(0.0, 0.0, f.counts, beam, geom);
    for (double x : {-0.9, -0.3, 0.4, 0.8})
        CHECK(mle_objective(x, -x, f.counts, beam, geom) ==
              doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("mle gradient matches central finite differences") {
    const ArrayGeometry geom(1.0, 4);
    const BeamParams beam{30.0, 0.25, 0.1, -0.2, 0.8};
    RngStream s(3, {stream_tag::kSignalFrame, 0});
    const CountFrame f = sample_frame(beam, geom, SlotKind::signal_plus_noise, s);
    const ArrayGeometry whole(geom.half_width(), 1);  // [-a,a]^2 as one cell

    RngStream pts(3, {99});
    for (int rep = 0; rep < 12; ++rep) {
        const double x = -0.6 + 1.2 * pts.next_double();
        const double y = -0.6 + 1.2 * pts.next_double();
        const BeamParams cand = beam.with_center(x, y);
        // analytic gradient: sum z_m g_m / Lambda_m minus the capture gradient
        const std::vector<double> lams = cell_means(cand, geom);
        double grad = 0.0;
        for (int m = 0; m < geom.cell_count(); ++m)
            grad += static_cast<double>(f.counts[m]) *
                    cell_gradient_integrals(cand, geom, m).g_x / lams[m];
        grad -= cell_gradient_integrals(cand, whole, 0).g_x;

        const double h = 1e-6;
        const double fd = (mle_objective(x + h, y, f.counts, beam, geom) -
                           mle_objective(x - h, y, f.counts, beam, geom)) /
                          (2.0 * h);
        CHECK(fd == doctest::Approx(grad).epsilon(1e-5));
    }
}

TEST_CASE("mle objective peaks at the center for high-count frames") {
    const ArrayGeometry geom(1.0, 4);
    const BeamParams beam{620.0, 0.2, 0.4, 0.4, 1.0};
    RngStream s(5, {stream_tag::kSignalFrame, 1});
    const CountFrame f = sample_frame(beam, geom, SlotKind::signal_plus_noise, s);
    const double at_truth = mle_objective(beam.x0, beam.y0, f.counts, beam, geom);
    RngStream pts(5, {98});
    for (int i = 0; i < 1000; ++i) {
        const double x = -1.0 + 2.0 * pts.next_double();
        const double y = -1.0 + 2.0 * pts.next_double();
        if (std::abs(x - beam.x0) < 0.05 && std::abs(y - beam.y0) < 0.05) continue;
        CHECK(mle_objective(x, y, f.counts, beam, geom) < at_truth);
    }
}

TEST_CASE("mle argmax is invariant under I0 rescaling when noiseless") {
    const ArrayGeometry geom(1.0, 4);
    const BeamParams beam{40.0, 0.2, 0.25, -0.1, 0.0};
    RngStream s(7, {stream_tag::kSignalFrame, 2});
    const CountFrame f = sample_frame(beam, geom, SlotKind::signal_plus_noise, s);
    BeamParams scaled = beam;
    scaled.I0 *= 7.5;

    double best_a = -1e300, best_b = -1e300;
    int arg_a = -1, arg_b = -1;
    int idx = 0;
    for (int ix = 0; ix <= 40; ++ix)
        for (int iy = 0; iy <= 40; ++iy, ++idx) {
            const double x = -1.0 + 0.05 * ix;
            const double y = -1.0 + 0.05 * iy;
            const double va = mle_objective(x, y, f.counts, beam, geom);
            const double vb = mle_objective(x, y, f.counts, scaled, geom);
            if (va > best_a) { best_a = va; arg_a = idx; }
            if (vb > best_b) { best_b = vb; arg_b = idx; }
        }
    CHECK(arg_a == arg_b);
}

TEST_CASE("ga finds the sphere optimum") {
    GaConfig config;  // defaults: 50 chromosomes, 400 generations
    RngStream s(11, {stream_tag::kGa, 0});
    const GaResult best =
        ga_optimize([](double x, double y) { return -(x * x + y * y); }, config, s);
    CHECK(std::hypot(best.x, best.y) < 1e-3);
}

TEST_CASE("ga beats a random-sampling baseline on a multimodal surface") {
    const auto rastrigin = [](double x, double y) {
        return -(20.0 + x * x - 10.0 * std::cos(2.0 * M_PI * x) + y * y -
                 10.0 * std::cos(2.0 * M_PI * y));
    };
    GaConfig config;
    RngStream s(11, {stream_tag::kGa, 1});
    const GaResult best = ga_optimize(rastrigin, config, s);

    RngStream base(11, {stream_tag::kGa, 2});
    double baseline = -1e300;
    for (int i = 0; i < 10000; ++i) {
        const double x = -1.0 + 2.0 * base.next_double();
        const double y = -1.0 + 2.0 * base.next_double();
        baseline = std::max(baseline, rastrigin(x, y));
    }
    CHECK(best.value >= baseline);
}

TEST_CASE("ga is deterministic and box-bounded") {
    GaConfig config;
    config.x_lo = -0.25;
    config.x_hi = 0.5;
    config.y_lo = 0.1;
    config.y_hi = 0.2;
    config.mutation_sigma = 5.0;  // force clamping
    config.generations = 40;
    const auto fitness = [](double x, double y) { return x + y; };
    RngStream s1(13, {stream_tag::kGa, 3});
    RngStream s2(13, {stream_tag::kGa, 3});
    const GaResult a = ga_optimize(fitness, config, s1);
    const GaResult b = ga_optimize(fitness, config, s2);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.value == b.value);
    CHECK(a.x <= 0.5);
    CHECK(a.x >= -0.25);
    CHECK(a.y >= 0.1);
    CHECK(a.y <= 0.2);
    CHECK(a.value == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("ga best value is nondecreasing in the generation budget") {
    const auto fitness = [](double x, double y) {
        return -(std::abs(x - 0.3) + 2.0 * std::abs(y + 0.4));
    };
    double prev = -1e300;
    for (int gens : {5, 25, 100, 400}) {
        GaConfig config;
        config.generations = gens;
        RngStream s(13, {stream_tag::kGa, 4});
        const GaResult r = ga_optimize(fitness, config, s);
        CHECK(r.value >= prev);
        prev = r.value;
    }
}

TEST_CASE("nls and mle trackers localize a bright noiseless beam") {
    const ArrayGeometry geom(1.0, 4);
    const BeamParams beam{620.0, 0.2, 0.4, 0.4, 1e-3};
    GaConfig config;
    config.mutation_sigma = 0.0;  // auto: half a cell side
    for (int t = 0; t < 5; ++t) {
        RngStream fs(17, {stream_tag::kSignalFrame, static_cast<std::uint64_t>(t)});
        const CountFrame f = sample_frame(beam, geom, SlotKind::signal_plus_noise, fs);
        RngStream g1(17, {stream_tag::kGa, static_cast<std::uint64_t>(t), 0});
        RngStream g2(17, {stream_tag::kGa, static_cast<std::uint64_t>(t), 1});
        const PositionEstimate nls = estimate_nls(f, beam, geom, config, g1);
        const PositionEstimate mle = estimate_mle(f, beam, geom, config, g2);
        const double tol = geom.cell_side() / 10.0;
        CHECK(std::hypot(nls.x - beam.x0, nls.y - beam.y0) < tol);
        CHECK(std::hypot(mle.x - beam.x0, mle.y - beam.y0) < tol);
        CHECK(nls.tag == EstimatorTag::NLS);
        CHECK(mle.tag == EstimatorTag::MLE);
    }
}

}  // TEST_SUITE
