// Benchmark: runs the same population once with the serial stepper and
// once with the OpenMP stepper, checks the outputs are bitwise identical,
// and reports wall-clock timings.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "dca/population.hpp"
#include "dca/scoring.hpp"
#include "dca/signals.hpp"

namespace {

struct BenchCase {
    int cells = 20000;
    long steps = 200;
    int signals_per_category = 16;
    int events_per_step = 8;
};

dca::SignalTrace make_trace(const BenchCase& bench, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> level(0.0, 100.0);
    std::uniform_real_distribution<double> inflammation(0.0, 1.0);
    dca::SignalTrace trace;
    for (long t = 0; t < bench.steps; ++t) {
        dca::SignalSnapshot snapshot;
        for (int i = 0; i < bench.signals_per_category; ++i) {
            snapshot.pamp.push_back(level(rng));
            snapshot.danger.push_back(level(rng));
            snapshot.safe.push_back(level(rng));
        }
        snapshot.inflammation = inflammation(rng);
        trace.times.push_back(static_cast<double>(t));
        trace.snapshots.push_back(std::move(snapshot));
    }
    return trace;
}

std::vector<dca::AntigenEvent> make_events(const BenchCase& bench, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> type(0, 15);
    std::vector<dca::AntigenEvent> events;
    for (long t = 0; t < bench.steps; ++t) {
        for (int i = 0; i < bench.events_per_step; ++i) {
            events.push_back({static_cast<double>(t), "proc-" + std::to_string(type(rng))});
        }
    }
    return events;
}

struct Timed {
    dca::RunResult result;
    double seconds = 0;
};

Timed run_backend(const dca::SignalTrace& trace, const std::vector<dca::AntigenEvent>& events,
                  const dca::PopulationConfig& base, dca::StepBackend backend) {
    dca::PopulationConfig config = base;
    config.backend = backend;
    const dca::WeightMatrix weights;
    const auto start = std::chrono::steady_clock::now();
    Timed timed;
    timed.result = dca::run(trace, events, weights, config);
    const auto stop = std::chrono::steady_clock::now();
    timed.seconds = std::chrono::duration<double>(stop - start).count();
    return timed;
}

} // namespace

int main(int argc, char** argv) {
    BenchCase bench;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--quick") {
            bench.cells = 2000;
            bench.steps = 50;
        } else if (arg == "--cells" && i + 1 < argc) {
            bench.cells = std::stoi(argv[++i]);
        } else if (arg == "--steps" && i + 1 < argc) {
            bench.steps = std::stol(argv[++i]);
        } else {
            std::cerr << "usage: dca_bench [--quick] [--cells N] [--steps N]\n";
            return 2;
        }
    }

    std::mt19937_64 rng(7);
    const auto trace = make_trace(bench, rng);
    const auto events = make_events(bench, rng);

    dca::PopulationConfig config;
    config.n_cells = bench.cells;
    config.threshold_distribution = dca::ThresholdDistribution::Uniform;
    config.mode = dca::RunMode::Deterministic;
    config.antigen_per_update = 4;

    const auto serial = run_backend(trace, events, config, dca::StepBackend::Serial);
    const auto parallel = run_backend(trace, events, config, dca::StepBackend::Parallel);

    const std::string serial_log = dca::serialize_log(serial.result.log);
    const std::string parallel_log = dca::serialize_log(parallel.result.log);
    const std::string serial_reports = dca::serialize_reports(serial.result.reports);
    const std::string parallel_reports = dca::serialize_reports(parallel.result.reports);

    std::cout << "cells=" << bench.cells << " steps=" << bench.steps
              << " presentations=" << serial.result.diagnostics.presentations << "\n";
    std::cout << "serial:   " << serial.seconds << " s\n";
    std::cout << "parallel: " << parallel.seconds << " s\n";
    if (parallel.seconds > 0) {
        std::cout << "speedup:  " << serial.seconds / parallel.seconds << "x\n";
    }

    if (serial_log != parallel_log || serial_reports != parallel_reports) {
        std::cout << "MISMATCH: parallel output differs from serial reference\n";
        return 1;
    }
    std::cout << "outputs identical\n";
    return 0;
}
