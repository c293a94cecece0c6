#include "beamtrack/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace beamtrack {

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::crlb_sweep: return "crlb_sweep";
        case ExperimentKind::mse_sweep: return "mse_sweep";
        case ExperimentKind::bias_sweep: return "bias_sweep";
        case ExperimentKind::ser_sweep: return "ser_sweep";
        case ExperimentKind::landscape: return "landscape";
        case ExperimentKind::calibrate: return "calibrate";
    }
    return "?";
}

std::string to_string(SweepVariable var) {
    switch (var) {
        case SweepVariable::none: return "none";
        case SweepVariable::noise_power_uw: return "noise_power_uw";
        case SweepVariable::signal_power_uw: return "signal_power_uw";
        case SweepVariable::lambda_n: return "lambda_n";
        case SweepVariable::I0: return "I0";
        case SweepVariable::rho: return "rho";
        case SweepVariable::cells_per_side: return "cells_per_side";
        case SweepVariable::calibration_slots: return "calibration_slots";
    }
    return "?";
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

struct Entry {
    std::string value;
    int line;
};

class Parser {
public:
    explicit Parser(const std::string& text) {
        std::istringstream in(text);
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            const std::string line = trim(raw);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                error(line_no, "expected key=value, got '" + line + "'");
                continue;
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) {
                error(line_no, "empty key");
                continue;
            }
            auto [it, inserted] = entries_.try_emplace(key, Entry{value, line_no});
            if (!inserted) {
                warnings.push_back("duplicate key '" + key + "' (line " +
                                   std::to_string(line_no) + "); last value wins");
                it->second = Entry{value, line_no};
            }
        }
    }

    void error(int line, const std::string& msg) { errors.push_back({line, msg}); }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    // Each accessor consumes the key so leftovers can be reported as unknown.
    std::optional<Entry> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        Entry e = it->second;
        last_line_ = e.line;
        entries_.erase(it);
        return e;
    }

    // Range error for the most recently taken key.
    void range_error(const std::string& msg) { errors.push_back({last_line_, msg}); }

    std::optional<std::string> take_string(const std::string& key) {
        auto e = take(key);
        if (!e) return std::nullopt;
        return e->value;
    }

    std::optional<double> take_double(const std::string& key) {
        auto e = take(key);
        if (!e) return std::nullopt;
        try {
            std::size_t pos = 0;
            const double v = std::stod(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            error(e->line, key + ": expected a number, got '" + e->value + "'");
            return std::nullopt;
        }
    }

    std::optional<std::int64_t> take_int(const std::string& key) {
        auto e = take(key);
        if (!e) return std::nullopt;
        std::int64_t v = 0;
        const auto* first = e->value.data();
        const auto* last = first + e->value.size();
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last) {
            error(e->line, key + ": expected an integer, got '" + e->value + "'");
            return std::nullopt;
        }
        return v;
    }

    std::optional<std::vector<double>> take_double_list(const std::string& key) {
        auto e = take(key);
        if (!e) return std::nullopt;
        std::vector<double> out;
        for (const auto& item : split(e->value, ',')) {
            try {
                std::size_t pos = 0;
                out.push_back(std::stod(item, &pos));
                if (pos != item.size()) throw std::invalid_argument("");
            } catch (...) {
                error(e->line, key + ": expected numbers, got '" + item + "'");
                return std::nullopt;
            }
        }
        return out;
    }

    void report_unknown() {
        for (const auto& [key, entry] : entries_)
            error(entry.line, "unknown key '" + key + "'");
    }

    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    std::vector<ParseIssue> errors;
    std::vector<std::string> warnings;

private:
    std::map<std::string, Entry> entries_;
    int last_line_ = 0;
};

std::optional<EstimatorTag> tag_from_string(const std::string& s) {
    if (s == "mdc") return EstimatorTag::MDC;
    if (s == "centroid") return EstimatorTag::Centroid;
    if (s == "auc") return EstimatorTag::AUC;
    if (s == "ace1") return EstimatorTag::ACE1;
    if (s == "ace2") return EstimatorTag::ACE2;
    if (s == "nls") return EstimatorTag::NLS;
    if (s == "mle") return EstimatorTag::MLE;
    return std::nullopt;
}

}  // namespace

ParseResult parse_config(const std::string& text) {
    Parser p(text);
    ExperimentConfig cfg;
    cfg.ga.mutation_sigma = 0.0;  // auto: half a cell side

    // kind (required)
    int kind_line = 0;
    if (auto e = p.take("kind")) {
        kind_line = e->line;
        const std::string& v = e->value;
        if (v == "crlb_sweep") cfg.kind = ExperimentKind::crlb_sweep;
        else if (v == "mse_sweep") cfg.kind = ExperimentKind::mse_sweep;
        else if (v == "bias_sweep") cfg.kind = ExperimentKind::bias_sweep;
        else if (v == "ser_sweep") cfg.kind = ExperimentKind::ser_sweep;
        else if (v == "landscape") cfg.kind = ExperimentKind::landscape;
        else if (v == "calibrate") cfg.kind = ExperimentKind::calibrate;
        else p.error(e->line, "kind: unknown experiment kind '" + v + "'");
    } else {
        p.error(0, "kind: required key is missing");
    }

    if (auto v = p.take_int("seed")) cfg.seed = static_cast<std::uint64_t>(*v);
    if (auto v = p.take_int("trials")) {
        if (*v < 1) p.range_error("trials: must be >= 1");
        else cfg.trials = *v;
    }
    if (auto v = p.take_string("out")) cfg.out = *v;

    if (auto e = p.take("geometry.half_width")) {
        try {
            cfg.half_width = std::stod(e->value);
        } catch (...) {
            p.error(e->line, "geometry.half_width: expected a number");
        }
        if (!(cfg.half_width > 0.0))
            p.error(e->line, "geometry.half_width: must be > 0");
    }
    if (auto e = p.take("geometry.cells_per_side")) {
        cfg.cells_per_side.clear();
        for (const auto& item : split(e->value, ',')) {
            try {
                const int n = std::stoi(item);
                if (n < 1) throw std::out_of_range("");
                cfg.cells_per_side.push_back(n);
            } catch (...) {
                p.error(e->line,
                        "geometry.cells_per_side: must be positive integers, got '" +
                            item + "'");
            }
        }
        if (cfg.cells_per_side.empty())
            p.error(e->line, "geometry.cells_per_side: empty list");
    }

    if (auto e = p.take("beam.center")) {
        if (e->value == "random" || e->value.rfind("random:", 0) == 0) {
            cfg.center_spec = CenterSpec::uniform_random;
            if (e->value.size() > 7) {
                try {
                    cfg.center_inset = std::stod(e->value.substr(7));
                } catch (...) {
                    p.error(e->line, "beam.center: bad inset in '" + e->value + "'");
                }
                if (cfg.center_inset < 0.0)
                    p.error(e->line, "beam.center: inset must be >= 0");
            }
        } else {
            const auto parts = split(e->value, ',');
            bool ok = parts.size() == 2;
            if (ok) {
                try {
                    cfg.center_x = std::stod(parts[0]);
                    cfg.center_y = std::stod(parts[1]);
                } catch (...) {
                    ok = false;
                }
            }
            if (!ok)
                p.error(e->line, "beam.center: expected 'x,y' or 'random', got '" +
                                     e->value + "'");
        }
    }

    const bool has_rho = p.has("beam.rho");
    if (auto e = p.take("beam.rho")) {
        try {
            cfg.rho = std::stod(e->value);
        } catch (...) {
            p.error(e->line, "beam.rho: expected a number");
        }
        if (!(cfg.rho > 0.0)) p.error(e->line, "beam.rho: must be > 0");
    }

    const bool has_I0 = p.has("beam.I0");
    const bool has_lambda = p.has("beam.lambda_n");
    const bool has_sig_pow = p.has("beam.signal_power_uw");
    const bool has_noise_pow = p.has("beam.noise_power_uw");
    if (auto v = p.take_double("beam.I0")) {
        if (*v < 0.0) p.range_error("beam.I0: must be >= 0");
        else cfg.I0 = *v;
    }
    if (auto v = p.take_double("beam.lambda_n")) {
        if (*v < 0.0) p.range_error("beam.lambda_n: must be >= 0");
        else cfg.lambda_n = *v;
    }
    if (auto v = p.take_double("beam.signal_power_uw")) cfg.signal_power_uw = *v;
    if (auto v = p.take_double("beam.noise_power_uw")) cfg.noise_power_uw = *v;

    if ((has_I0 || has_lambda) && (has_sig_pow || has_noise_pow))
        p.error(kind_line,
                "intensity style: give either beam.I0/beam.lambda_n or "
                "beam.*_power_uw with link.* keys, not both");
    cfg.power_style = has_sig_pow || has_noise_pow;
    if (cfg.power_style && !(has_sig_pow && has_noise_pow))
        p.error(kind_line,
                "intensity style: power style needs both beam.signal_power_uw "
                "and beam.noise_power_uw");

    if (auto v = p.take_double("link.eta")) {
        if (!(*v > 0.0 && *v <= 1.0)) p.range_error("link.eta: must be in (0, 1]");
        else cfg.link_eta = *v;
    }
    if (auto v = p.take_double("link.slot_seconds")) {
        if (!(*v > 0.0)) p.range_error("link.slot_seconds: must be > 0");
        else cfg.link_slot_seconds = *v;
    }
    if (auto v = p.take_double("link.wavelength")) {
        if (!(*v > 0.0)) p.range_error("link.wavelength: must be > 0");
        else cfg.link_wavelength = *v;
    }
    if (auto v = p.take_double("link.rho0")) {
        if (!(*v > 0.0)) p.range_error("link.rho0: must be > 0");
        else cfg.link_rho0 = *v;
    }
    const bool has_distance = p.has("link.distance");
    if (auto v = p.take_double("link.distance")) {
        if (!(*v >= 0.0)) p.range_error("link.distance: must be >= 0");
        else cfg.link_distance = *v;
    }
    cfg.rho_from_link = !has_rho && has_distance;

    if (auto e = p.take("sweep.variable")) {
        const std::string& v = e->value;
        if (v == "noise_power_uw") cfg.sweep_variable = SweepVariable::noise_power_uw;
        else if (v == "signal_power_uw") cfg.sweep_variable = SweepVariable::signal_power_uw;
        else if (v == "lambda_n") cfg.sweep_variable = SweepVariable::lambda_n;
        else if (v == "I0") cfg.sweep_variable = SweepVariable::I0;
        else if (v == "rho") cfg.sweep_variable = SweepVariable::rho;
        else if (v == "cells_per_side") cfg.sweep_variable = SweepVariable::cells_per_side;
        else if (v == "calibration_slots")
            cfg.sweep_variable = SweepVariable::calibration_slots;
        else if (v == "none") cfg.sweep_variable = SweepVariable::none;
        else p.error(e->line, "sweep.variable: unknown variable '" + v + "'");
    }
    if (auto v = p.take_double_list("sweep.values")) cfg.sweep_values = *v;

    if (auto e = p.take("estimators")) {
        cfg.estimators.clear();
        if (!e->value.empty()) {
            for (const auto& item : split(e->value, ',')) {
                if (item.empty()) continue;
                if (auto tag = tag_from_string(item)) cfg.estimators.push_back(*tag);
                else p.error(e->line, "estimators: unknown estimator '" + item + "'");
            }
        }
    }
    if (auto e = p.take("analytic")) {
        cfg.analytic.clear();
        if (!e->value.empty()) {
            for (const auto& item : split(e->value, ',')) {
                if (item.empty()) continue;
                auto tag = tag_from_string(item);
                if (tag && (*tag == EstimatorTag::MDC || *tag == EstimatorTag::Centroid ||
                            *tag == EstimatorTag::AUC))
                    cfg.analytic.push_back(*tag);
                else
                    p.error(e->line,
                            "analytic: only mdc, centroid and auc have analytic "
                            "MSE/bias, got '" + item + "'");
            }
        }
    }

    if (auto v = p.take_double("estimator.ace1.n")) {
        if (!(*v >= 1.0)) p.range_error("estimator.ace1.n: must be >= 1");
        else cfg.ace1.n_power = *v;
    }
    if (auto v = p.take_double("estimator.ace2.n")) {
        if (!(*v >= 1.0)) p.range_error("estimator.ace2.n: must be >= 1");
        else cfg.ace2.n_power = *v;
    }
    if (auto v = p.take_int("estimator.ace2.n_top")) {
        if (*v < 1) p.range_error("estimator.ace2.n_top: must be >= 1");
        else cfg.ace2.n_top = static_cast<int>(*v);
    }

    if (auto e = p.take("constants")) {
        if (e->value == "oracle") cfg.constants = ConstantsMode::oracle;
        else if (e->value == "calibrated") cfg.constants = ConstantsMode::calibrated;
        else p.error(e->line, "constants: expected oracle or calibrated");
    }
    if (auto v = p.take_int("calibration.slots")) {
        if (*v < 1) p.range_error("calibration.slots: must be >= 1");
        else cfg.calibration_slots = static_cast<int>(*v);
    }
    if (auto v = p.take_int("analytic.centers")) {
        if (*v < 1) p.range_error("analytic.centers: must be >= 1");
        else cfg.analytic_centers = static_cast<int>(*v);
    }

    if (auto v = p.take_int("ga.population")) cfg.ga.population = static_cast<int>(*v);
    if (auto v = p.take_int("ga.generations")) cfg.ga.generations = static_cast<int>(*v);
    if (auto v = p.take_double("ga.mutation_sigma")) cfg.ga.mutation_sigma = *v;
    if (auto v = p.take_double("ga.mutation_prob")) cfg.ga.mutation_prob = *v;
    if (auto v = p.take_double("ga.crossover_alpha")) cfg.ga.crossover_alpha = *v;
    if (auto v = p.take_int("ga.elitism")) cfg.ga.elitism = static_cast<int>(*v);
    if (cfg.ga.population < 4) p.range_error("ga.population: must be >= 4");
    if (cfg.ga.generations < 1) p.range_error("ga.generations: must be >= 1");
    if (cfg.ga.elitism < 0 || cfg.ga.elitism >= cfg.ga.population)
        p.range_error("ga.elitism: must be in [0, ga.population)");

    if (auto v = p.take_double("truncation.epsilon0")) {
        if (!(*v > 0.0)) p.range_error("truncation.epsilon0: must be > 0");
        else cfg.truncation.epsilon0 = *v;
    }
    if (auto v = p.take_int("truncation.k_max")) {
        if (*v < 1) p.range_error("truncation.k_max: must be >= 1");
        else cfg.truncation.k_max = static_cast<int>(*v);
    }

    if (auto v = p.take_int("ppm.order")) {
        if (*v < 2) p.range_error("ppm.order: must be >= 2");
        else cfg.ppm_order = static_cast<int>(*v);
    }
    if (auto v = p.take_int("landscape.grid")) {
        if (*v < 2) p.range_error("landscape.grid: must be >= 2");
        else cfg.landscape_grid = static_cast<int>(*v);
    }

    p.report_unknown();

    // Cross-field validation.
    const bool is_sweep_kind = cfg.kind == ExperimentKind::crlb_sweep ||
                               cfg.kind == ExperimentKind::mse_sweep ||
                               cfg.kind == ExperimentKind::bias_sweep ||
                               cfg.kind == ExperimentKind::ser_sweep ||
                               cfg.kind == ExperimentKind::calibrate;
    if (is_sweep_kind && cfg.sweep_values.empty())
        p.error(kind_line, "sweep.values: required for kind " + to_string(cfg.kind));
    if (cfg.kind != ExperimentKind::crlb_sweep && cfg.cells_per_side.size() > 1 &&
        cfg.sweep_variable != SweepVariable::cells_per_side)
        p.error(kind_line,
                "geometry.cells_per_side: a list is only allowed for crlb_sweep");
    if (cfg.sweep_variable == SweepVariable::cells_per_side) {
        for (double v : cfg.sweep_values)
            if (!(v >= 1.0) || v != std::floor(v))
                p.error(kind_line, "sweep.values: cells_per_side values must be "
                                   "positive integers");
    }
    if (cfg.sweep_variable == SweepVariable::calibration_slots &&
        cfg.kind != ExperimentKind::calibrate)
        p.error(kind_line, "sweep.variable: calibration_slots requires kind calibrate");
    if (cfg.kind == ExperimentKind::calibrate &&
        cfg.sweep_variable != SweepVariable::calibration_slots)
        p.error(kind_line, "kind calibrate sweeps calibration_slots only");
    if (cfg.sweep_variable == SweepVariable::calibration_slots) {
        for (double v : cfg.sweep_values)
            if (!(v >= 1.0) || v != std::floor(v))
                p.error(kind_line,
                        "sweep.values: calibration_slots values must be positive "
                        "integers");
    }
    if (cfg.kind == ExperimentKind::landscape &&
        cfg.center_spec != CenterSpec::fixed)
        p.error(kind_line, "beam.center: landscape needs a fixed center");
    if (cfg.center_spec == CenterSpec::uniform_random &&
        !(cfg.center_inset < cfg.half_width))
        p.error(kind_line, "beam.center: inset must be smaller than the half-width");
    const bool sweep_needs_power = cfg.sweep_variable == SweepVariable::noise_power_uw ||
                                   cfg.sweep_variable == SweepVariable::signal_power_uw;
    const bool sweep_needs_direct = cfg.sweep_variable == SweepVariable::lambda_n ||
                                    cfg.sweep_variable == SweepVariable::I0;
    if (sweep_needs_power && !cfg.power_style)
        p.error(kind_line, "sweep.variable: power sweeps need the power intensity style");
    if (sweep_needs_direct && cfg.power_style)
        p.error(kind_line, "sweep.variable: direct sweeps need beam.I0/beam.lambda_n");
    if ((cfg.kind == ExperimentKind::mse_sweep || cfg.kind == ExperimentKind::bias_sweep ||
         cfg.kind == ExperimentKind::ser_sweep) &&
        cfg.estimators.empty() && cfg.analytic.empty())
        p.error(kind_line, "estimators: at least one estimator (or analytic row) needed");
    if (cfg.kind == ExperimentKind::ser_sweep && !cfg.analytic.empty())
        p.error(kind_line, "analytic: not available for ser_sweep");

    ParseResult result;
    result.errors = std::move(p.errors);
    result.warnings = std::move(p.warnings);
    std::stable_sort(result.errors.begin(), result.errors.end(),
                     [](const ParseIssue& a, const ParseIssue& b) { return a.line < b.line; });
    if (result.errors.empty()) result.config = std::move(cfg);
    return result;
}

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "kind = " << to_string(c.kind) << "\n";
    out << "seed = " << c.seed << "\n";
    out << "trials = " << c.trials << "\n";
    out << "out = " << c.out << "\n";
    out << "geometry.half_width = " << g17(c.half_width) << "\n";
    out << "geometry.cells_per_side = ";
    for (std::size_t i = 0; i < c.cells_per_side.size(); ++i)
        out << (i ? "," : "") << c.cells_per_side[i];
    out << "\n";
    if (c.center_spec == CenterSpec::uniform_random) {
        out << "beam.center = random";
        if (c.center_inset > 0.0) out << ":" << g17(c.center_inset);
        out << "\n";
    }
    else
        out << "beam.center = " << g17(c.center_x) << "," << g17(c.center_y) << "\n";
    if (!c.rho_from_link) out << "beam.rho = " << g17(c.rho) << "\n";
    if (c.power_style) {
        out << "beam.signal_power_uw = " << g17(c.signal_power_uw) << "\n";
        out << "beam.noise_power_uw = " << g17(c.noise_power_uw) << "\n";
    } else {
        out << "beam.I0 = " << g17(c.I0) << "\n";
        out << "beam.lambda_n = " << g17(c.lambda_n) << "\n";
    }
    out << "link.eta = " << g17(c.link_eta) << "\n";
    out << "link.slot_seconds = " << g17(c.link_slot_seconds) << "\n";
    out << "link.wavelength = " << g17(c.link_wavelength) << "\n";
    out << "link.rho0 = " << g17(c.link_rho0) << "\n";
    if (c.rho_from_link) out << "link.distance = " << g17(c.link_distance) << "\n";
    if (c.sweep_variable != SweepVariable::none) {
        out << "sweep.variable = " << to_string(c.sweep_variable) << "\n";
        out << "sweep.values = ";
        for (std::size_t i = 0; i < c.sweep_values.size(); ++i)
            out << (i ? "," : "") << g17(c.sweep_values[i]);
        out << "\n";
    }
    out << "estimators = ";
    for (std::size_t i = 0; i < c.estimators.size(); ++i)
        out << (i ? "," : "") << to_string(c.estimators[i]);
    out << "\n";
    out << "analytic = ";
    for (std::size_t i = 0; i < c.analytic.size(); ++i)
        out << (i ? "," : "") << to_string(c.analytic[i]);
    out << "\n";
    out << "estimator.ace1.n = " << g17(c.ace1.n_power) << "\n";
    out << "estimator.ace2.n = " << g17(c.ace2.n_power) << "\n";
    out << "estimator.ace2.n_top = " << c.ace2.n_top << "\n";
    out << "constants = "
        << (c.constants == ConstantsMode::oracle ? "oracle" : "calibrated") << "\n";
    out << "calibration.slots = " << c.calibration_slots << "\n";
    out << "analytic.centers = " << c.analytic_centers << "\n";
    out << "ga.population = " << c.ga.population << "\n";
    out << "ga.generations = " << c.ga.generations << "\n";
    out << "ga.mutation_sigma = " << g17(c.ga.mutation_sigma) << "\n";
    out << "ga.mutation_prob = " << g17(c.ga.mutation_prob) << "\n";
    out << "ga.crossover_alpha = " << g17(c.ga.crossover_alpha) << "\n";
    out << "ga.elitism = " << c.ga.elitism << "\n";
    out << "truncation.epsilon0 = " << g17(c.truncation.epsilon0) << "\n";
    out << "truncation.k_max = " << c.truncation.k_max << "\n";
    out << "ppm.order = " << c.ppm_order << "\n";
    out << "landscape.grid = " << c.landscape_grid << "\n";
    return out.str();
}

}  // namespace beamtrack
