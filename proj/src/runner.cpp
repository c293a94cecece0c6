#include "beamtrack/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "beamtrack/calibration.hpp"
#include "beamtrack/crlb.hpp"
#include "beamtrack/detection.hpp"
#include "beamtrack/opt_estimators.hpp"

namespace beamtrack {

namespace {

constexpr std::int64_t kBlockSize = 4096;

// Runs trial_fn for t in [0, trials) across worker threads. Trials are
// partitioned into fixed-size blocks with one accumulator slot per block, so
// the merged result is independent of the thread count.
template <typename Acc, typename TrialFn>
std::vector<Acc> run_blocks(std::int64_t trials, int threads, const TrialFn& trial_fn) {
    const std::int64_t nblocks = (trials + kBlockSize - 1) / kBlockSize;
    std::vector<Acc> blocks(static_cast<std::size_t>(nblocks));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto worker = [&]() {
        try {
            for (;;) {
                const std::int64_t b = next.fetch_add(1);
                if (b >= nblocks || failed.load()) break;
                const std::int64_t lo = b * kBlockSize;
                const std::int64_t hi = std::min(trials, lo + kBlockSize);
                for (std::int64_t t = lo; t < hi; ++t)
                    trial_fn(t, blocks[static_cast<std::size_t>(b)]);
            }
        } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
        }
    };

    const int extra = std::max(0, threads - 1);
    std::vector<std::thread> pool;
    pool.reserve(extra);
    for (int i = 0; i < extra; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return blocks;
}

// Scalar statistics accumulated per estimator and sweep point.
struct EstAccum {
    std::int64_t n = 0;
    double sum_d = 0.0, sum_d2 = 0.0;    // squared radial error and its square
    double sum_dx = 0.0, sum_dx2 = 0.0;  // x error
    double sum_dy = 0.0, sum_dy2 = 0.0;  // y error
    std::int64_t degenerate = 0;
    std::int64_t decision_errors = 0;

    void add_error(double dx, double dy, bool degen) {
        const double d = dx * dx + dy * dy;
        ++n;
        sum_d += d;
        sum_d2 += d * d;
        sum_dx += dx;
        sum_dx2 += dx * dx;
        sum_dy += dy;
        sum_dy2 += dy * dy;
        if (degen) ++degenerate;
    }

    void merge(const EstAccum& o) {
        n += o.n;
        sum_d += o.sum_d;
        sum_d2 += o.sum_d2;
        sum_dx += o.sum_dx;
        sum_dx2 += o.sum_dx2;
        sum_dy += o.sum_dy;
        sum_dy2 += o.sum_dy2;
        degenerate += o.degenerate;
        decision_errors += o.decision_errors;
    }
};

struct TrialAccum {
    std::vector<EstAccum> est;

    void ensure(std::size_t k) {
        if (est.size() < k) est.resize(k);
    }

    void merge(const TrialAccum& o) {
        ensure(o.est.size());
        for (std::size_t i = 0; i < o.est.size(); ++i) est[i].merge(o.est[i]);
    }
};

double sample_stderr(double sum, double sum_sq, std::int64_t n) {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    const double var = std::max(0.0, sum_sq / nn - mean * mean);
    return std::sqrt(var / nn);
}

struct PointContext {
    const ExperimentConfig* cfg;
    ArrayGeometry geom;
    BeamParams beam;  // sweep applied; center is the fixed center (if any)
    int point_index;
    std::uint64_t seed;
};

BeamParams draw_center(const PointContext& ctx, std::int64_t trial) {
    if (ctx.cfg->center_spec == CenterSpec::fixed)
        return ctx.beam.with_center(ctx.cfg->center_x, ctx.cfg->center_y);
    RngStream s(ctx.seed, {stream_tag::kCenterDraw,
                           static_cast<std::uint64_t>(ctx.point_index),
                           static_cast<std::uint64_t>(trial)});
    const double a = ctx.geom.half_width() - ctx.cfg->center_inset;
    return ctx.beam.with_center(-a + 2.0 * a * s.next_double(),
                                -a + 2.0 * a * s.next_double());
}

// Beam constants handed to AUC/NLS/MLE: ground truth in oracle mode, a
// method-of-moments calibration in calibrated mode. The nominal center only
// feeds AUC's capture term (full capture in practice).
BeamParams tracker_constants(const PointContext& ctx, const BeamParams& truth,
                             std::int64_t trial, std::int64_t* clamped) {
    if (ctx.cfg->constants == ConstantsMode::oracle) return truth;
    RngStream s(ctx.seed, {stream_tag::kCalibration,
                           static_cast<std::uint64_t>(ctx.point_index),
                           static_cast<std::uint64_t>(trial)});
    const CalibrationRun run =
        sample_calibration_run(truth, ctx.geom, ctx.cfg->calibration_slots, s);
    const CalibrationEstimate est = estimate_I0(run.signal, run.noise, ctx.geom);
    if (est.clamped && clamped) ++*clamped;
    BeamParams constants = truth.with_center(0.0, 0.0);
    constants.I0 = std::max(est.I0_hat, 1e-12);
    constants.lambda_n = est.lambda_n_hat;
    return constants;
}

PositionEstimate run_estimator(EstimatorTag tag, const CountFrame& frame,
                               const PointContext& ctx, const BeamParams& constants,
                               std::int64_t trial, int est_index) {
    switch (tag) {
        case EstimatorTag::MDC: {
            RngStream s(ctx.seed, {stream_tag::kTieBreak,
                                   static_cast<std::uint64_t>(ctx.point_index),
                                   static_cast<std::uint64_t>(trial)});
            return estimate_mdc(frame, ctx.geom, s);
        }
        case EstimatorTag::Centroid:
            return estimate_centroid(frame, ctx.geom);
        case EstimatorTag::AUC:
            return estimate_auc(frame, ctx.geom, constants);
        case EstimatorTag::ACE1:
            return estimate_ace1(frame, ctx.geom, ctx.cfg->ace1);
        case EstimatorTag::ACE2: {
            AceParams p = ctx.cfg->ace2;
            p.n_top = std::min(p.n_top, ctx.geom.cell_count());
            return estimate_ace2(frame, ctx.geom, p);
        }
        case EstimatorTag::NLS:
        case EstimatorTag::MLE: {
            RngStream s(ctx.seed, {stream_tag::kGa,
                                   static_cast<std::uint64_t>(ctx.point_index),
                                   static_cast<std::uint64_t>(trial),
                                   static_cast<std::uint64_t>(est_index)});
            return tag == EstimatorTag::NLS
                       ? estimate_nls(frame, constants, ctx.geom, ctx.cfg->ga, s)
                       : estimate_mle(frame, constants, ctx.geom, ctx.cfg->ga, s);
        }
    }
    throw std::logic_error("run_estimator: unknown tag");
}

void push_error_rows(SweepResult& out, double sweep, const std::string& name,
                     const EstAccum& acc, bool bias_only) {
    const double nn = static_cast<double>(acc.n);
    const double mse = acc.sum_d / nn;
    const double rmse = std::sqrt(mse);
    const double se_mse = sample_stderr(acc.sum_d, acc.sum_d2, acc.n);
    if (!bias_only) {
        out.rows.push_back({sweep, name, "mse", mse, se_mse, acc.n, acc.degenerate});
        out.rows.push_back({sweep, name, "rmse", rmse,
                            rmse > 0.0 ? se_mse / (2.0 * rmse) : 0.0, acc.n,
                            acc.degenerate});
    }
    out.rows.push_back({sweep, name, "bias_x", acc.sum_dx / nn,
                        sample_stderr(acc.sum_dx, acc.sum_dx2, acc.n), acc.n,
                        acc.degenerate});
    out.rows.push_back({sweep, name, "bias_y", acc.sum_dy / nn,
                        sample_stderr(acc.sum_dy, acc.sum_dy2, acc.n), acc.n,
                        acc.degenerate});
}

void run_mse_monte_carlo(const PointContext& ctx, double sweep_value, int threads,
                         SweepResult& out, bool bias_only);
void run_mse_analytic(const PointContext& ctx, double sweep_value, SweepResult& out,
                      bool bias_only);

void run_mse_point(const PointContext& ctx, double sweep_value, int threads,
                   SweepResult& out, bool bias_only) {
    const auto& estimators = ctx.cfg->estimators;
    if (!estimators.empty()) run_mse_monte_carlo(ctx, sweep_value, threads, out, bias_only);
    run_mse_analytic(ctx, sweep_value, out, bias_only);
}

void run_mse_monte_carlo(const PointContext& ctx, double sweep_value, int threads,
                         SweepResult& out, bool bias_only) {
    const auto& estimators = ctx.cfg->estimators;
    const auto trial_fn = [&](std::int64_t t, TrialAccum& acc) {
        acc.ensure(estimators.size());
        const BeamParams truth = draw_center(ctx, t);
        RngStream fs(ctx.seed, {stream_tag::kSignalFrame,
                                static_cast<std::uint64_t>(ctx.point_index),
                                static_cast<std::uint64_t>(t)});
        const CountFrame frame =
            sample_frame(truth, ctx.geom, SlotKind::signal_plus_noise, fs);
        const BeamParams constants = tracker_constants(ctx, truth, t, nullptr);
        for (std::size_t e = 0; e < estimators.size(); ++e) {
            const PositionEstimate est = run_estimator(
                estimators[e], frame, ctx, constants, t, static_cast<int>(e));
            acc.est[e].add_error(est.x - truth.x0, est.y - truth.y0, est.degenerate);
        }
    };
    const auto blocks = run_blocks<TrialAccum>(ctx.cfg->trials, threads, trial_fn);
    TrialAccum total;
    for (const auto& b : blocks) total.merge(b);

    for (std::size_t e = 0; e < estimators.size(); ++e)
        push_error_rows(out, sweep_value, to_string(estimators[e]), total.est[e],
                        bias_only);
}

// Analytic rows: exact at a fixed center, otherwise averaged over sampled
// centers with the spread reported as stderr.
void run_mse_analytic(const PointContext& ctx, double sweep_value, SweepResult& out,
                      bool bias_only) {
    for (EstimatorTag tag : ctx.cfg->analytic) {
        const std::string name = to_string(tag);
        const int centers =
            ctx.cfg->center_spec == CenterSpec::fixed ? 1 : ctx.cfg->analytic_centers;
        double sum_mse = 0.0, sum_mse2 = 0.0;
        double sum_bx = 0.0, sum_bx2 = 0.0, sum_by = 0.0, sum_by2 = 0.0;
        for (int c = 0; c < centers; ++c) {
            const BeamParams truth = draw_center(ctx, c);
            double mse, bx, by;
            if (tag == EstimatorTag::MDC) {
                const MdcAnalytic a = mdc_mse_bias(truth, ctx.geom, ctx.cfg->truncation);
                mse = a.mse;
                bx = a.bias_x;
                by = a.bias_y;
            } else {
                const CentroidAnalytic a = centroid_mse_bias(
                    truth, ctx.geom, ctx.cfg->truncation, tag == EstimatorTag::AUC);
                mse = a.mse;
                bx = a.bias_x;
                by = a.bias_y;
            }
            sum_mse += mse;
            sum_mse2 += mse * mse;
            sum_bx += bx;
            sum_bx2 += bx * bx;
            sum_by += by;
            sum_by2 += by * by;
        }
        const double nn = centers;
        if (!bias_only) {
            out.rows.push_back({sweep_value, name, "mse_analytic", sum_mse / nn,
                                sample_stderr(sum_mse, sum_mse2, centers), 0, 0});
            out.rows.push_back({sweep_value, name, "rmse_analytic",
                                std::sqrt(sum_mse / nn), 0.0, 0, 0});
        }
        out.rows.push_back({sweep_value, name, "bias_x_analytic", sum_bx / nn,
                            sample_stderr(sum_bx, sum_bx2, centers), 0, 0});
        out.rows.push_back({sweep_value, name, "bias_y_analytic", sum_by / nn,
                            sample_stderr(sum_by, sum_by2, centers), 0, 0});
    }
}

void run_ser_point(const PointContext& ctx, double sweep_value, int threads,
                   SweepResult& out) {
    const auto& estimators = ctx.cfg->estimators;
    const std::size_t n_receivers = estimators.size() + 1;  // + perfect CSI
    const int order = ctx.cfg->ppm_order;

    const auto trial_fn = [&](std::int64_t t, TrialAccum& acc) {
        acc.ensure(n_receivers);
        const BeamParams truth = draw_center(ctx, t);
        RngStream es(ctx.seed, {stream_tag::kEstimation,
                                static_cast<std::uint64_t>(ctx.point_index),
                                static_cast<std::uint64_t>(t)});
        const CountFrame tracking_frame =
            sample_frame(truth, ctx.geom, SlotKind::signal_plus_noise, es);
        const BeamParams constants = tracker_constants(ctx, truth, t, nullptr);

        RngStream ps(ctx.seed, {stream_tag::kPpm,
                                static_cast<std::uint64_t>(ctx.point_index),
                                static_cast<std::uint64_t>(t)});
        const int true_slot = static_cast<int>(ps.next_below(order));
        const PpmFrame symbol = sample_ppm_frame(truth, ctx.geom, order, true_slot, ps);

        for (std::size_t e = 0; e < n_receivers; ++e) {
            BeamParams assumed = truth;
            bool degenerate = false;
            if (e < estimators.size()) {
                const PositionEstimate est =
                    run_estimator(estimators[e], tracking_frame, ctx, constants, t,
                                  static_cast<int>(e));
                assumed = constants.with_center(est.x, est.y);
                degenerate = est.degenerate;
                acc.est[e].add_error(est.x - truth.x0, est.y - truth.y0, degenerate);
            } else {
                acc.est[e].add_error(0.0, 0.0, false);
            }
            const ReceiverWeights w = build_weights(assumed, ctx.geom);
            RngStream ds(ctx.seed, {stream_tag::kDecision,
                                    static_cast<std::uint64_t>(ctx.point_index),
                                    static_cast<std::uint64_t>(t),
                                    static_cast<std::uint64_t>(e)});
            if (ml_decide(symbol, w, ds) != true_slot) ++acc.est[e].decision_errors;
        }
    };
    const auto blocks = run_blocks<TrialAccum>(ctx.cfg->trials, threads, trial_fn);
    TrialAccum total;
    for (const auto& b : blocks) total.merge(b);

    for (std::size_t e = 0; e < n_receivers; ++e) {
        const std::string name =
            e < estimators.size() ? to_string(estimators[e]) : "perfect";
        const EstAccum& acc = total.est[e];
        const double nn = static_cast<double>(acc.n);
        const double ser = static_cast<double>(acc.decision_errors) / nn;
        out.rows.push_back({sweep_value, name, "ser", ser,
                            std::sqrt(std::max(0.0, ser * (1.0 - ser)) / nn), acc.n,
                            acc.degenerate});
        if (e < estimators.size()) {
            const double mse = acc.sum_d / nn;
            out.rows.push_back({sweep_value, name, "mse", mse,
                                sample_stderr(acc.sum_d, acc.sum_d2, acc.n), acc.n,
                                acc.degenerate});
        }
    }
}

void run_calibrate_point(const PointContext& ctx, double sweep_value, int slots,
                         int threads, SweepResult& out) {
    struct CalAccum {
        std::int64_t n = 0;
        double sum_i0 = 0.0, sum_i0_err2 = 0.0;
        double sum_ln = 0.0, sum_ln_err2 = 0.0;
        std::int64_t clamped = 0;
        void merge(const CalAccum& o) {
            n += o.n;
            sum_i0 += o.sum_i0;
            sum_i0_err2 += o.sum_i0_err2;
            sum_ln += o.sum_ln;
            sum_ln_err2 += o.sum_ln_err2;
            clamped += o.clamped;
        }
    };
    const auto trial_fn = [&](std::int64_t t, CalAccum& acc) {
        const BeamParams truth = draw_center(ctx, t);
        RngStream s(ctx.seed, {stream_tag::kCalibration,
                               static_cast<std::uint64_t>(ctx.point_index),
                               static_cast<std::uint64_t>(t)});
        const CalibrationRun run = sample_calibration_run(truth, ctx.geom, slots, s);
        const CalibrationEstimate est = estimate_I0(run.signal, run.noise, ctx.geom);
        ++acc.n;
        acc.sum_i0 += est.I0_hat;
        acc.sum_i0_err2 += (est.I0_hat - truth.I0) * (est.I0_hat - truth.I0);
        acc.sum_ln += est.lambda_n_hat;
        acc.sum_ln_err2 +=
            (est.lambda_n_hat - truth.lambda_n) * (est.lambda_n_hat - truth.lambda_n);
        if (est.clamped) ++acc.clamped;
    };
    const auto blocks = run_blocks<CalAccum>(ctx.cfg->trials, threads, trial_fn);
    CalAccum total;
    for (const auto& b : blocks) total.merge(b);

    const double nn = static_cast<double>(total.n);
    out.rows.push_back({sweep_value, "calibration", "i0_mean", total.sum_i0 / nn, 0.0,
                        total.n, total.clamped});
    out.rows.push_back({sweep_value, "calibration", "i0_rmse",
                        std::sqrt(total.sum_i0_err2 / nn), 0.0, total.n, total.clamped});
    out.rows.push_back({sweep_value, "calibration", "lambda_n_mean", total.sum_ln / nn,
                        0.0, total.n, total.clamped});
    out.rows.push_back({sweep_value, "calibration", "lambda_n_rmse",
                        std::sqrt(total.sum_ln_err2 / nn), 0.0, total.n, total.clamped});
}

}  // namespace

int resolve_threads(const RunOptions& options) {
    if (options.threads > 0) return options.threads;
    if (const char* env = std::getenv("BEAMTRACK_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

BeamParams resolve_beam(const ExperimentConfig& cfg, SweepVariable variable,
                        double value, double array_area) {
    BeamParams beam;
    beam.x0 = cfg.center_x;
    beam.y0 = cfg.center_y;

    double signal_uw = cfg.signal_power_uw;
    double noise_uw = cfg.noise_power_uw;
    double I0 = cfg.I0;
    double lambda_n = cfg.lambda_n;
    double rho = cfg.rho;
    switch (variable) {
        case SweepVariable::noise_power_uw: noise_uw = value; break;
        case SweepVariable::signal_power_uw: signal_uw = value; break;
        case SweepVariable::lambda_n: lambda_n = value; break;
        case SweepVariable::I0: I0 = value; break;
        case SweepVariable::rho: rho = value; break;
        default: break;
    }

    if (cfg.rho_from_link)
        rho = spot_size(cfg.link_rho0, cfg.link_wavelength, cfg.link_distance);
    beam.rho = rho;

    if (cfg.power_style) {
        const LinkBudget link{cfg.link_rho0, cfg.link_wavelength, cfg.link_distance,
                              cfg.link_slot_seconds, cfg.link_eta};
        // Signal power is the total beam power (2*pi*I0 photons when fully
        // captured); noise power spreads uniformly over the array area.
        beam.I0 = scaled_intensity_from_power(link, signal_uw * 1e-6) / (2.0 * M_PI);
        beam.lambda_n = scaled_intensity_from_power(link, noise_uw * 1e-6) / array_area;
    } else {
        beam.I0 = I0;
        beam.lambda_n = lambda_n;
    }
    beam.validate();
    return beam;
}

SweepResult run_experiment(const ExperimentConfig& base_config,
                           const RunOptions& options) {
    ExperimentConfig cfg = base_config;
    if (options.seed_override) cfg.seed = *options.seed_override;
    const int threads = resolve_threads(options);

    SweepResult out;

    // One pseudo-point for kinds without a sweep.
    std::vector<double> sweep_values = cfg.sweep_values;
    if (sweep_values.empty()) sweep_values.push_back(0.0);

    int point_index = 0;
    for (double value : sweep_values) {
        for (std::size_t gi = 0; gi < cfg.cells_per_side.size(); ++gi) {
            int n_side = cfg.cells_per_side[gi];
            if (cfg.sweep_variable == SweepVariable::cells_per_side)
                n_side = static_cast<int>(value);
            const ArrayGeometry geom(cfg.half_width, n_side);
            BeamParams beam;
            try {
                beam = resolve_beam(cfg, cfg.sweep_variable, value, geom.array_area());
            } catch (const std::exception& ex) {
                out.warnings.push_back("sweep point " + format_g17(value) +
                                       " skipped: " + ex.what());
                continue;
            }
            beam.x0 = cfg.center_x;
            beam.y0 = cfg.center_y;
            PointContext ctx{&cfg, geom, beam, point_index, cfg.seed};
            ++point_index;

            const std::string suffix = cfg.cells_per_side.size() > 1
                                           ? "[N=" + std::to_string(n_side) + "]"
                                           : "";
            switch (cfg.kind) {
                case ExperimentKind::crlb_sweep: {
                    try {
                        const CrlbResult r = crlb(beam, geom);
                        out.rows.push_back({value, "crlb", "var_x_lb" + suffix,
                                            r.var_x_lb, 0.0, 0, 0});
                        out.rows.push_back({value, "crlb", "var_y_lb" + suffix,
                                            r.var_y_lb, 0.0, 0, 0});
                    } catch (const std::exception& ex) {
                        out.rows.push_back({value, "crlb", "var_x_lb" + suffix,
                                            std::nan(""), 0.0, 0, 0});
                        out.rows.push_back({value, "crlb", "var_y_lb" + suffix,
                                            std::nan(""), 0.0, 0, 0});
                        out.warnings.push_back("crlb failed at sweep " +
                                               format_g17(value) + suffix + ": " +
                                               ex.what());
                    }
                    break;
                }
                case ExperimentKind::mse_sweep:
                    run_mse_point(ctx, value, threads, out, /*bias_only=*/false);
                    break;
                case ExperimentKind::bias_sweep:
                    run_mse_point(ctx, value, threads, out, /*bias_only=*/true);
                    break;
                case ExperimentKind::ser_sweep:
                    run_ser_point(ctx, value, threads, out);
                    break;
                case ExperimentKind::landscape: {
                    const BeamParams truth =
                        beam.with_center(cfg.center_x, cfg.center_y);
                    const auto grid =
                        snr_ratio_landscape(truth, geom, cfg.landscape_grid);
                    for (std::size_t i = 0; i < grid.size(); ++i) {
                        const double idx = static_cast<double>(i);
                        out.rows.push_back({idx, "landscape", "x", grid[i].x, 0.0, 0, 0});
                        out.rows.push_back({idx, "landscape", "y", grid[i].y, 0.0, 0, 0});
                        out.rows.push_back(
                            {idx, "landscape", "mu_over_sigma", grid[i].ratio, 0.0, 0, 0});
                    }
                    const LandscapePoint best = landscape_argmax(grid);
                    out.rows.push_back({-1.0, "landscape", "argmax_x", best.x, 0.0, 0, 0});
                    out.rows.push_back({-1.0, "landscape", "argmax_y", best.y, 0.0, 0, 0});
                    break;
                }
                case ExperimentKind::calibrate:
                    run_calibrate_point(ctx, value, static_cast<int>(value), threads, out);
                    break;
            }
        }
    }
    return out;
}

}  // namespace beamtrack
