#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace beamtrack {

struct SweepRow {
    double sweep = 0.0;
    std::string estimator;
    std::string metric;
    double value = 0.0;
    double stderr_est = 0.0;  // 0 for analytic/deterministic rows
    std::int64_t trials = 0;
    std::int64_t degenerate = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;
};

/// %.17g with the C locale; round-trips doubles exactly.
std::string format_g17(double v);

std::string to_csv(const SweepResult& result);

/// Writes RFC-4180-style CSV (header row, '.' decimals, LF endings).
void emit_csv(const SweepResult& result, const std::string& path);

std::uint64_t fnv1a64(std::string_view bytes);

/// Sidecar run manifest next to the CSV: config hash, seed, version, wall
/// time, warnings.
void write_manifest(const std::string& csv_path, std::uint64_t config_hash,
                    std::uint64_t seed, double wall_seconds,
                    const std::vector<std::string>& warnings);

}  // namespace beamtrack
