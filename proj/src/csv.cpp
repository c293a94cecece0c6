#include "beamtrack/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "beamtrack/version.hpp"

namespace beamtrack {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string to_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "sweep,estimator,metric,value,stderr,trials,degenerate\n";
    for (const auto& row : result.rows) {
        out << format_g17(row.sweep) << ',' << row.estimator << ',' << row.metric << ','
            << format_g17(row.value) << ',' << format_g17(row.stderr_est) << ','
            << row.trials << ',' << row.degenerate << '\n';
    }
    return out.str();
}

void emit_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
    const std::string text = to_csv(result);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("emit_csv: write failed for '" + path + "'");
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_manifest(const std::string& csv_path, std::uint64_t config_hash,
                    std::uint64_t seed, double wall_seconds,
                    const std::vector<std::string>& warnings) {
    const std::string path = csv_path + ".manifest.txt";
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_manifest: cannot open '" + path + "'");
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(config_hash));
    out << "config_hash = " << hash_hex << "\n";
    out << "seed = " << seed << "\n";
    out << "version = " << kVersion << "\n";
    out << "wall_seconds = " << format_g17(wall_seconds) << "\n";
    for (const auto& w : warnings) out << "warning = " << w << "\n";
}

}  // namespace beamtrack
