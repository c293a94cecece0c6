#include <doctest.h>

#include <cmath>
#include <vector>

#include "beamtrack/estimators.hpp"
#include "beamtrack/model.hpp"

using namespace beamtrack;

namespace {

CountFrame frame_of(std::vector<std::int64_t> counts) {
    return CountFrame{std::move(counts), SlotKind::signal_plus_noise};
}

CountFrame random_frame(const BeamParams& beam, const ArrayGeometry& geom,
                        std::uint64_t seed, std::uint64_t trial) {
    RngStream s(seed, {stream_tag::kSignalFrame, trial});
    return sample_frame(beam, geom, SlotKind::signal_plus_noise, s);
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("mdc picks the unique maximum") {
    const ArrayGeometry geom(1.0, 4);
    std::vector<std::int64_t> counts(16, 0);
    counts[0] = 5;
    counts[1] = 1;
    RngStream s(1, {stream_tag::kTieBreak, 0});
    const PositionEstimate est = estimate_mdc(frame_of(counts), geom, s);
    CHECK(est.x == doctest::Approx(geom.cell_center_x(0)));
    CHECK(est.y == doctest::Approx(geom.cell_center_y(0)));
    CHECK_FALSE(est.degenerate);
}

TEST_CASE("mdc all-zero frames fall back to the array center") {
    const ArrayGeometry geom(1.0, 4);
    RngStream s(1, {stream_tag::kTieBreak, 1});
    const PositionEstimate est = estimate_mdc(frame_of(std::vector<std::int64_t>(16, 0)),
                                              geom, s);
    CHECK(est.degenerate);
    CHECK(est.x == 0.0);
    CHECK(est.y == 0.0);
}

TEST_CASE("mdc breaks ties uniformly") {
    const ArrayGeometry geom(1.0, 2);
    std::vector<int> hits(4, 0);
    const int n = 100000;
    for (int t = 0; t < n; ++t) {
        RngStream s(1, {stream_tag::kTieBreak, static_cast<std::uint64_t>(t)});
        const PositionEstimate est =
            estimate_mdc(frame_of({3, 3, 3, 3}), geom, s);
        for (int m = 0; m < 4; ++m)
            if (est.x == geom.cell_center_x(m) && est.y == geom.cell_center_y(m))
                ++hits[m];
    }
    for (int m = 0; m < 4; ++m)
        CHECK(std::abs(hits[m] - n / 4) < 5 * std::sqrt(n * 0.25 * 0.75));
}

TEST_CASE("centroid basics") {
    const ArrayGeometry geom(1.0, 4);
    std::vector<std::int64_t> one(16, 0);
    one[9] = 7;
    const PositionEstimate single = estimate_centroid(frame_of(one), geom);
    CHECK(single.x == doctest::Approx(geom.cell_center_x(9)));
    CHECK(single.y == doctest::Approx(geom.cell_center_y(9)));

    const PositionEstimate flat =
        estimate_centroid(frame_of(std::vector<std::int64_t>(16, 3)), geom);
    CHECK(flat.x == doctest::Approx(0.0));
    CHECK(flat.y == doctest::Approx(0.0));

    const PositionEstimate degen =
        estimate_centroid(frame_of(std::vector<std::int64_t>(16, 0)), geom);
    CHECK(degen.degenerate);
}

TEST_CASE("centroid empirical mean matches sum x_m p_m") {
    const ArrayGeometry geom(1.0, 4);
    const BeamParams beam{6.2, 0.2, 0.15, 0.15, 4.38};  // Fig. 4-like scale
    const std::vector<double> lams = cell_means(beam, geom);
    double lam_s = 0.0, ex = 0.0;
    for (int m = 0; m < 16; ++m) lam_s += lams[m];
    for (int m = 0; m < 16; ++m) ex += geom.cell_center_x(m) * lams[m] / lam_s;

    const int n = 200000;
    double sum = 0.0;
    int used = 0;
    for (int t = 0; t < n; ++t) {
        const PositionEstimate est =
            estimate_centroid(random_frame(beam, geom, 17, t), geom);
        if (est.degenerate) continue;
        sum += est.x;
        ++used;
    }
    // conditional mean is exact for every z_s >= 1, so 5 sigma on the MC mean
    CHECK(std::abs(sum / used - ex) < 5.0 * 0.25 / std::sqrt(static_cast<double>(used)));
}

TEST_CASE("auc equals centroid scaled by K") {
    const ArrayGeometry geom(1.0, 4);
    BeamParams beam{6.2, 0.2, 0.15, 0.15, 4.38};
    const double k = total_mean_count(beam, geom) / (2.0 * M_PI * beam.I0);
    for (int t = 0; t < 50; ++t) {
        const CountFrame f = random_frame(beam, geom, 23, t);
        const PositionEstimate c = estimate_centroid(f, geom);
        const PositionEstimate u = estimate_auc(f, geom, beam);
        if (c.degenerate) {
            CHECK(u.degenerate);
            continue;
        }
        CHECK(u.x == doctest::Approx(k * c.x).epsilon(1e-13));
        CHECK(u.y == doctest::Approx(k * c.y).epsilon(1e-13));
    }
    // noiseless full capture: K = 1 and AUC coincides with the centroid
    BeamParams clean{6.2, 0.05, 0.0, 0.0, 0.0};
    const CountFrame f = random_frame(clean, geom, 24, 0);
    const PositionEstimate c = estimate_centroid(f, geom);
    const PositionEstimate u = estimate_auc(f, geom, clean);
    CHECK(u.x == doctest::Approx(c.x).epsilon(1e-9));
    BeamParams no_signal = clean;
    no_signal.I0 = 0.0;
    CHECK_THROWS_AS(estimate_auc(f, geom, no_signal), std::invalid_argument);
}

TEST_CASE("ace1 reduces to the centroid at n = 1") {
    const ArrayGeometry geom(1.0, 4);
    const BeamParams beam{6.2, 0.2, 0.3, -0.2, 2.0};
    for (int t = 0; t < 1000; ++t) {
        const CountFrame f = random_frame(beam, geom, 29, t);
        const PositionEstimate ace = estimate_ace1(f, geom, AceParams{1.0, 0});
        const PositionEstimate cen = estimate_centroid(f, geom);
        CHECK(ace.degenerate == cen.degenerate);
        if (!ace.degenerate) {
            CHECK(ace.x == cen.x);
            CHECK(ace.y == cen.y);
        }
    }
}

TEST_CASE("ace1 arithmetic at n = 2") {
    const ArrayGeometry geom(1.0, 2);  // centers at +-0.5
    // counts 2 and 1 in the two bottom cells: (4*(-0.5) + 1*(0.5)) / 5
    const PositionEstimate est =
        estimate_ace1(frame_of({2, 1, 0, 0}), geom, AceParams{2.0, 0});
    CHECK(est.x == doctest::Approx((4.0 * -0.5 + 1.0 * 0.5) / 5.0));
    CHECK(est.y == doctest::Approx(-0.5));
}

TEST_CASE("large n approaches the maximum cell") {
    const ArrayGeometry geom(1.0, 4);
    const BeamParams beam{6.2, 0.2, 0.3, -0.2, 2.0};
    for (int t = 0; t < 200; ++t) {
        const CountFrame f = random_frame(beam, geom, 31, t);
        std::int64_t best = 0;
        int best_m = -1, ties = 0;
        for (int m = 0; m < 16; ++m) {
            if (f.counts[m] > best) {
                best = f.counts[m];
                best_m = m;
                ties = 1;
            } else if (f.counts[m] == best && best > 0) {
                ++ties;
            }
        }
        if (best_m < 0 || ties > 1) continue;  // needs a unique maximum
        const PositionEstimate est = estimate_ace1(f, geom, AceParams{50.0, 0});
        CHECK(std::abs(est.x - geom.cell_center_x(best_m)) < 1e-6);
        CHECK(std::abs(est.y - geom.cell_center_y(best_m)) < 1e-6);
    }
}

TEST_CASE("ace2 reductions") {
    const ArrayGeometry geom(1.0, 2);
    const BeamParams beam{6.2, 0.2, 0.3, -0.2, 2.0};
    for (int t = 0; t < 500; ++t) {
        const CountFrame f = random_frame(beam, geom, 37, t);
        const PositionEstimate a1 = estimate_ace1(f, geom, AceParams{2.0, 0});
        const PositionEstimate a2 = estimate_ace2(f, geom, AceParams{2.0, 4});
        CHECK(a1.degenerate == a2.degenerate);
        if (!a1.degenerate) {
            // identical, not just close: same cells in the same order
            CHECK(a1.x == a2.x);
            CHECK(a1.y == a2.y);
        }
    }
    // n_top = 1 keeps only the largest count (ties: lowest cell index)
    const PositionEstimate top1 =
        estimate_ace2(frame_of({1, 4, 4, 0}), geom, AceParams{2.0, 1});
    CHECK(top1.x == doctest::Approx(geom.cell_center_x(1)));
    CHECK(top1.y == doctest::Approx(geom.cell_center_y(1)));
    CHECK_THROWS_AS(estimate_ace2(frame_of({1, 1, 1, 1}), geom, AceParams{2.0, 5}),
                    std::invalid_argument);
}

TEST_CASE("estimates stay in the cell-center hull; AUC in K times it") {
    const ArrayGeometry geom(1.0, 4);
    const BeamParams beam{6.2, 0.2, 0.6, 0.6, 4.0};
    const double k = total_mean_count(beam, geom) / (2.0 * M_PI * beam.I0);
    const double hull = geom.cell_center_x(15);
    for (int t = 0; t < 500; ++t) {
        const CountFrame f = random_frame(beam, geom, 41, t);
        const PositionEstimate c = estimate_centroid(f, geom);
        if (c.degenerate) continue;
        CHECK(std::abs(c.x) <= hull + 1e-12);
        CHECK(std::abs(c.y) <= hull + 1e-12);
        const PositionEstimate u = estimate_auc(f, geom, beam);
        CHECK(std::abs(u.x) <= k * hull + 1e-12);
        CHECK(std::abs(u.y) <= k * hull + 1e-12);
    }
}

TEST_CASE("translation covariance on the cell lattice") {
    const ArrayGeometry geom(1.0, 4);
    const BeamParams beam{6.2, 0.2, -0.3, 0.1, 2.0};
    const double side = geom.cell_side();
    for (int t = 0; t < 200; ++t) {
        CountFrame f = random_frame(beam, geom, 43, t);
        // keep the rightmost column empty so the shift stays interior
        for (int row = 0; row < 4; ++row) f.counts[row * 4 + 3] = 0;
        CountFrame shifted = f;
        for (int row = 0; row < 4; ++row)
            for (int col = 3; col >= 1; --col)
                shifted.counts[row * 4 + col] = f.counts[row * 4 + col - 1];
        for (int row = 0; row < 4; ++row) shifted.counts[row * 4] = 0;
        if (f.total() == 0) continue;

        const PositionEstimate c0 = estimate_centroid(f, geom);
        const PositionEstimate c1 = estimate_centroid(shifted, geom);
        CHECK(c1.x - c0.x == doctest::Approx(side).epsilon(1e-12));
        CHECK(c1.y == doctest::Approx(c0.y).epsilon(1e-12));

        const PositionEstimate a0 = estimate_ace1(f, geom, AceParams{2.0, 0});
        const PositionEstimate a1 = estimate_ace1(shifted, geom, AceParams{2.0, 0});
        CHECK(a1.x - a0.x == doctest::Approx(side).epsilon(1e-12));

        const PositionEstimate e0 = estimate_ace2(f, geom, AceParams{2.0, 3});
        const PositionEstimate e1 = estimate_ace2(shifted, geom, AceParams{2.0, 3});
        CHECK(e1.x - e0.x == doctest::Approx(side).epsilon(1e-12));

        RngStream s0(1, {stream_tag::kTieBreak, static_cast<std::uint64_t>(t)});
        RngStream s1(1, {stream_tag::kTieBreak, static_cast<std::uint64_t>(t)});
        const PositionEstimate m0 = estimate_mdc(f, geom, s0);
        const PositionEstimate m1 = estimate_mdc(shifted, geom, s1);
        CHECK(m1.x - m0.x == doctest::Approx(side).epsilon(1e-12));
        CHECK(m1.y == doctest::Approx(m0.y).epsilon(1e-12));
    }
}

TEST_CASE("ace converges to the centroid as cells shrink") {
    // M = 32^2 with per-cell means << 1, so multi-photon cells are rare.
    const ArrayGeometry geom(1.0, 32);
    const BeamParams beam{0.4, 0.4, 0.15, 0.15, 1e-3};
    double rms = 0.0;
    const int n = 10000;
    for (int t = 0; t < n; ++t) {
        const CountFrame f = random_frame(beam, geom, 47, t);
        const PositionEstimate a = estimate_ace1(f, geom, AceParams{2.0, 0});
        const PositionEstimate c = estimate_centroid(f, geom);
        if (a.degenerate || c.degenerate) continue;
        rms += (a.x - c.x) * (a.x - c.x) + (a.y - c.y) * (a.y - c.y);
    }
    rms = std::sqrt(rms / n);
    CHECK(rms < 0.02 * beam.rho);
}

}  // TEST_SUITE
