#include "beamtrack/frames.hpp"

#include <stdexcept>

namespace beamtrack {

CountFrame sample_frame(const BeamParams& beam, const ArrayGeometry& geom,
                        SlotKind kind, RngStream& stream) {
    beam.validate();
    CountFrame frame;
    frame.kind = kind;
    frame.counts.resize(geom.cell_count());
    if (kind == SlotKind::noise_only) {
        const double bg = beam.lambda_n * geom.cell_area();
        for (auto& z : frame.counts) z = stream.next_poisson(bg);
    } else {
        std::vector<double> lams = cell_means(beam, geom);
        for (int m = 0; m < geom.cell_count(); ++m)
            frame.counts[m] = stream.next_poisson(lams[m]);
    }
    return frame;
}

PpmFrame sample_ppm_frame(const BeamParams& beam, const ArrayGeometry& geom,
                          int order, int true_slot, RngStream& stream) {
    if (order < 2) throw std::invalid_argument("sample_ppm_frame: order must be >= 2");
    if (true_slot < 0 || true_slot >= order)
        throw std::invalid_argument("sample_ppm_frame: true_slot out of range");
    PpmFrame frame;
    frame.order = order;
    frame.true_slot = true_slot;
    frame.slots.reserve(order);
    for (int i = 0; i < order; ++i)
        frame.slots.push_back(sample_frame(
            beam, geom,
            i == true_slot ? SlotKind::signal_plus_noise : SlotKind::noise_only, stream));
    return frame;
}

CalibrationRun sample_calibration_run(const BeamParams& beam, const ArrayGeometry& geom,
                                      int n_slots, RngStream& stream) {
    if (n_slots < 1)
        throw std::invalid_argument("sample_calibration_run: n_slots must be >= 1");
    CalibrationRun run;
    run.signal.reserve(n_slots);
    run.noise.reserve(n_slots);
    for (int i = 0; i < n_slots; ++i)
        run.signal.push_back(sample_frame(beam, geom, SlotKind::signal_plus_noise, stream));
    for (int i = 0; i < n_slots; ++i)
        run.noise.push_back(sample_frame(beam, geom, SlotKind::noise_only, stream));
    return run;
}

}  // namespace beamtrack
