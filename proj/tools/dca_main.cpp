// Command-line driver: `run` correlates signal and antigen stream files
// into a per-antigen-type MCAV report; `generate` emits a synthetic
// port-scan scenario to exercise the engine with.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dca/errors.hpp"
#include "dca/ingest.hpp"
#include "dca/population.hpp"
#include "dca/scenario.hpp"
#include "dca/scoring.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;      // parse and configuration failures
constexpr int kExitInternal = 3;  // internal invariant violations

struct RunOptions {
    std::string signals_path;
    std::string antigen_path;
    std::string mapping_path;
    std::string out_path;
    int cells = 100;
    double w1 = 2.0;
    double w2 = 2.0;
    std::string mode = "deterministic";
    std::uint64_t seed = 0;
    std::string threshold_dist = "uniform";
    std::string threshold_range;  // "LO:HI", or a single value for fixed
    double mcav_threshold = 0.5;
    std::uint64_t segment_size = 0;
    int antigen_per_update = 1;
    bool serial = false;
};

struct GenerateOptions {
    std::string out_dir;
    long steps = 1000;
    std::string scan_window = "400:600";  // "none" disables the scan
    int normal_types = 3;
    double normal_rate = 2.0;
    double scan_rate = 4.0;
    std::string scan_type = "pid-666";
    bool bystander = false;
    double bystander_rate = 6.0;
    std::uint64_t seed = 1;
};

std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            const double value = std::stod(text);
            return {value, value};
        }
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw dca::ConfigError("cannot parse range '" + text + "' (expected LO:HI)");
    }
}

dca::PopulationConfig make_population_config(const RunOptions& options) {
    dca::PopulationConfig config;
    config.n_cells = options.cells;
    config.rng_seed = options.seed;
    config.antigen_per_update = options.antigen_per_update;
    config.backend = options.serial ? dca::StepBackend::Serial : dca::StepBackend::Parallel;

    if (options.mode == "deterministic") {
        config.mode = dca::RunMode::Deterministic;
    } else if (options.mode == "stochastic") {
        config.mode = dca::RunMode::Stochastic;
    } else {
        throw dca::ConfigError("unknown mode '" + options.mode +
                               "' (expected deterministic or stochastic)");
    }

    if (options.threshold_dist == "uniform") {
        config.threshold_distribution = dca::ThresholdDistribution::Uniform;
    } else if (options.threshold_dist == "gaussian") {
        config.threshold_distribution = dca::ThresholdDistribution::Gaussian;
    } else if (options.threshold_dist == "fixed") {
        config.threshold_distribution = dca::ThresholdDistribution::Fixed;
    } else {
        throw dca::ConfigError("unknown threshold distribution '" + options.threshold_dist +
                               "' (expected uniform, gaussian or fixed)");
    }

    if (!options.threshold_range.empty()) {
        const auto [low, high] = parse_range(options.threshold_range);
        config.threshold_low = low;
        config.threshold_high = high;
    }
    return config;
}

const char* to_string(dca::ThresholdDistribution dist) {
    switch (dist) {
        case dca::ThresholdDistribution::Uniform: return "uniform";
        case dca::ThresholdDistribution::Gaussian: return "gaussian";
        case dca::ThresholdDistribution::Fixed: return "fixed";
    }
    return "?";
}

std::string serialize_segment_reports(const std::vector<std::vector<dca::McavReport>>& segments) {
    std::string out = "segment,antigen_type,mature_count,semi_count,total,mcav,label\n";
    char buffer[64];
    for (std::size_t s = 0; s < segments.size(); ++s) {
        for (const auto& report : segments[s]) {
            out += std::to_string(s);
            out += ',';
            out += report.antigen_type;
            out += ',';
            out += std::to_string(report.mature_count);
            out += ',';
            out += std::to_string(report.semi_count);
            out += ',';
            out += std::to_string(report.total);
            out += ',';
            if (report.mcav) {
                std::snprintf(buffer, sizeof buffer, "%.6f", *report.mcav);
                out += buffer;
            }
            out += ',';
            out += to_string(report.label);
            out += '\n';
        }
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw dca::IngestError("cannot write '" + path + "'");
    }
    file << content;
    if (!file.good()) {
        throw dca::IngestError("failed writing '" + path + "'");
    }
}

int cmd_run(const RunOptions& options) {
    const dca::PopulationConfig config = make_population_config(options);
    const dca::WeightMatrix weights(options.w1, options.w2);

    if (config.n_cells < 10) {
        std::cerr << "warning: " << config.n_cells
                  << " cells is below the 10-cell minimum; results are unreliable\n";
    }

    const auto mapping = dca::parse_mapping_file(options.mapping_path);
    const auto signals = dca::parse_signal_stream(options.signals_path, mapping);
    const auto antigen = dca::parse_antigen_stream(options.antigen_path);

    // The whole signal stream doubles as the calibration prefix when the
    // threshold range is not given explicitly.
    const auto params = dca::resolve_threshold_params(config, signals.snapshots, weights);

    std::cerr << "config: signals=" << options.signals_path << " antigen=" << options.antigen_path
              << " mapping=" << options.mapping_path << " out=" << options.out_path << "\n";
    std::cerr << "config: cells=" << config.n_cells << " w1=" << options.w1
              << " w2=" << options.w2 << " mode=" << options.mode << " seed=" << options.seed
              << " threshold-dist=" << to_string(params.distribution) << " threshold-range="
              << params.a << ":" << params.b
              << (options.threshold_range.empty() ? " (calibrated)" : "")
              << " mcav-threshold=" << options.mcav_threshold
              << " segment-size=" << options.segment_size
              << " antigen-per-update=" << config.antigen_per_update
              << " backend=" << (options.serial ? "serial" : "parallel") << "\n";

    const auto result = dca::run(signals, antigen, weights, config, options.mcav_threshold);

    std::string report_text;
    if (options.segment_size > 0) {
        auto segments = dca::compute_mcav_segments(result.log, options.segment_size);
        for (auto& segment : segments) {
            dca::classify(segment, options.mcav_threshold);
        }
        report_text = serialize_segment_reports(segments);
    } else {
        report_text = dca::serialize_reports(result.reports);
    }
    write_text_file(options.out_path, report_text);

    const auto& diag = result.diagnostics;
    std::cerr << "diagnostics: steps=" << diag.steps << " cells=" << diag.cells
              << " presentations=" << diag.presentations << " ingested=" << diag.ingested_instances
              << " presented=" << diag.presented_instances
              << " unpresented=" << diag.unpresented_instances << " (held=" << diag.held_instances
              << ", queued=" << diag.queued_instances << ") dropped=" << diag.dropped_instances
              << "\n";
    return kExitOk;
}

int cmd_generate(const GenerateOptions& options) {
    dca::ScenarioSpec spec = dca::default_scenario();
    spec.duration_steps = options.steps;
    spec.scan_rate = options.scan_rate;
    spec.scan_type = options.scan_type;
    spec.bystander = options.bystander;
    spec.bystander_rate = options.bystander_rate;

    if (options.normal_types < 0) {
        throw dca::ConfigError("--normal-types must be >= 0");
    }
    spec.normal_types.clear();
    for (int i = 0; i < options.normal_types; ++i) {
        spec.normal_types.push_back({"pid-" + std::to_string(101 + i), options.normal_rate});
    }

    if (options.scan_window == "none") {
        spec.scan_window.reset();
    } else {
        const auto [start, end] = parse_range(options.scan_window);
        spec.scan_window = {static_cast<long>(start), static_cast<long>(end)};
    }

    const auto paths = dca::generate_scenario(spec, options.seed, options.out_dir);
    std::cerr << "generated: " << paths.signals << " " << paths.antigen << " "
              << paths.ground_truth << " " << paths.mapping << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dendritic-cell anomaly detection engine"};
    app.require_subcommand(1);

    RunOptions run_options;
    auto* run_cmd = app.add_subcommand(
        "run", "Correlate signal and antigen streams into an MCAV report");
    run_cmd->add_option("--signals", run_options.signals_path, "Signal stream CSV")->required();
    run_cmd->add_option("--antigen", run_options.antigen_path, "Antigen stream CSV")->required();
    run_cmd->add_option("--mapping", run_options.mapping_path, "Column-to-category mapping CSV")
        ->required();
    run_cmd->add_option("--out", run_options.out_path, "Report output path")->required();
    run_cmd->add_option("--cells", run_options.cells, "Population size (default 100)");
    run_cmd->add_option("--w1", run_options.w1, "PAMP weight of the costimulation row");
    run_cmd->add_option("--w2", run_options.w2, "PAMP weight of the mature row");
    run_cmd->add_option("--mode", run_options.mode, "deterministic|stochastic");
    run_cmd->add_option("--seed", run_options.seed, "RNG seed (stochastic mode)");
    run_cmd->add_option("--threshold-dist", run_options.threshold_dist,
                        "uniform|gaussian|fixed");
    run_cmd->add_option("--threshold-range", run_options.threshold_range,
                        "LO:HI bounds (gaussian: MEAN:STDDEV, fixed: VALUE); "
                        "default derives from the calibration median");
    run_cmd->add_option("--mcav-threshold", run_options.mcav_threshold,
                        "Anomaly threshold on MCAV (default 0.5)");
    run_cmd->add_option("--segment-size", run_options.segment_size,
                        "Score fixed-size antigen segments instead of the whole run (0 = off)");
    run_cmd->add_option("--antigen-per-update", run_options.antigen_per_update,
                        "Antigen capacity per cell per step (default 1)");
    run_cmd->add_flag("--serial", run_options.serial,
                      "Use the serial reference stepper instead of the parallel one");

    GenerateOptions gen_options;
    auto* gen_cmd = app.add_subcommand("generate", "Emit a synthetic port-scan scenario");
    gen_cmd->add_option("--out-dir", gen_options.out_dir, "Output directory")->required();
    gen_cmd->add_option("--steps", gen_options.steps, "Scenario length in steps (default 1000)");
    gen_cmd->add_option("--scan-window", gen_options.scan_window,
                        "Inclusive scan step range START:END, or 'none' (default 400:600)");
    gen_cmd->add_option("--normal-types", gen_options.normal_types,
                        "Number of normal antigen types (default 3)");
    gen_cmd->add_option("--normal-rate", gen_options.normal_rate,
                        "Events per step for each normal type (default 2)");
    gen_cmd->add_option("--scan-rate", gen_options.scan_rate,
                        "Events per step for the scan type inside the window (default 4)");
    gen_cmd->add_option("--scan-type", gen_options.scan_type, "Scan antigen type name");
    gen_cmd->add_flag("--bystander", gen_options.bystander,
                      "Make the first normal type co-active during the scan window");
    gen_cmd->add_option("--bystander-rate", gen_options.bystander_rate,
                        "In-window rate of the co-active type (default 6)");
    gen_cmd->add_option("--seed", gen_options.seed, "Generator seed (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_options);
        return cmd_generate(gen_options);
    } catch (const dca::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const dca::IngestError& e) {
        std::cerr << "ingestion error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}
