#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "beamtrack/runner.hpp"
#include "beamtrack/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int report_errors(const beamtrack::ParseResult& parsed) {
    for (const auto& issue : parsed.errors) {
        if (issue.line > 0)
            std::cerr << "config error (line " << issue.line << "): " << issue.message
                      << "\n";
        else
            std::cerr << "config error: " << issue.message << "\n";
    }
    return kExitConfig;
}

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::string out;
    int threads = 0;
};

int run_config(const CommonArgs& args,
               std::optional<beamtrack::ExperimentKind> forced_kind) {
    const auto text = read_file(args.config_path);
    if (!text) {
        std::cerr << "cannot read config file '" << args.config_path << "'\n";
        return kExitConfig;
    }
    auto parsed = beamtrack::parse_config(*text);
    if (!parsed.errors.empty()) return report_errors(parsed);
    beamtrack::ExperimentConfig config = *parsed.config;
    if (forced_kind) config.kind = *forced_kind;
    for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";

    beamtrack::RunOptions options;
    if (args.has_seed) options.seed_override = args.seed;
    options.threads = args.threads;
    const std::string out_path = args.out.empty() ? config.out : args.out;

    try {
        const auto start = std::chrono::steady_clock::now();
        beamtrack::SweepResult result = beamtrack::run_experiment(config, options);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        for (const auto& w : parsed.warnings) result.warnings.push_back(w);
        beamtrack::emit_csv(result, out_path);
        beamtrack::write_manifest(out_path, beamtrack::fnv1a64(*text),
                                  args.has_seed ? args.seed : config.seed, wall,
                                  result.warnings);
        std::cout << out_path << ": " << result.rows.size() << " rows ("
                  << beamtrack::format_g17(wall) << " s)\n";
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    } catch (const std::exception& ex) {
        std::cerr << "run failed: " << ex.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "experiment config file")->required();
    cmd->add_option("--seed", args.seed, "override the config seed")
        ->each([&args](const std::string&) { args.has_seed = true; });
    cmd->add_option("--out", args.out, "override the output CSV path");
    cmd->add_option("--threads", args.threads,
                    "worker threads (overrides BEAMTRACK_THREADS)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"beamtrack: photon-counting array beam tracking experiments"};
    app.set_version_flag("--version", beamtrack::kVersion);
    app.require_subcommand(1);

    CommonArgs run_args, crlb_args, mse_args, ser_args;
    std::string validate_path;

    CLI::App* run_cmd = app.add_subcommand("run", "run the experiment in a config file");
    add_common(run_cmd, run_args);
    CLI::App* crlb_cmd =
        app.add_subcommand("crlb", "run a config with kind forced to crlb_sweep");
    add_common(crlb_cmd, crlb_args);
    CLI::App* mse_cmd =
        app.add_subcommand("mse", "run a config with kind forced to mse_sweep");
    add_common(mse_cmd, mse_args);
    CLI::App* ser_cmd =
        app.add_subcommand("ser", "run a config with kind forced to ser_sweep");
    add_common(ser_cmd, ser_args);
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "parse and validate a config without running");
    validate_cmd->add_option("config", validate_path, "experiment config file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    if (validate_cmd->parsed()) {
        const auto text = read_file(validate_path);
        if (!text) {
            std::cerr << "cannot read config file '" << validate_path << "'\n";
            return kExitConfig;
        }
        const auto parsed = beamtrack::parse_config(*text);
        for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
        if (!parsed.errors.empty()) return report_errors(parsed);
        std::cout << "ok: kind=" << beamtrack::to_string(parsed.config->kind) << ", "
                  << parsed.config->sweep_values.size() << " sweep values\n";
        return kExitOk;
    }
    if (run_cmd->parsed()) return run_config(run_args, std::nullopt);
    if (crlb_cmd->parsed())
        return run_config(crlb_args, beamtrack::ExperimentKind::crlb_sweep);
    if (mse_cmd->parsed())
        return run_config(mse_args, beamtrack::ExperimentKind::mse_sweep);
    if (ser_cmd->parsed())
        return run_config(ser_args, beamtrack::ExperimentKind::ser_sweep);
    return kExitConfig;
}
