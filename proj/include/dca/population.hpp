#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dca/cell.hpp"
#include "dca/ingest.hpp"
#include "dca/scoring.hpp"
#include "dca/signals.hpp"

namespace dca {

enum class ThresholdDistribution { Uniform, Gaussian, Fixed };
enum class RunMode { Deterministic, Stochastic };

/// Which step backend executes the per-cell work. Both produce bitwise
/// identical output: cells are exclusively owned within a step and the
/// presentation log is committed in (migration_time, cell_id) order either
/// way. Serial is the reference the parallel kernel is tested against.
enum class StepBackend { Serial, Parallel };

struct PopulationConfig {
    int n_cells = 100;  // runs below 10 cells are permitted but flagged
    ThresholdDistribution threshold_distribution = ThresholdDistribution::Uniform;
    // Uniform: low/high bounds. Gaussian: low = mean, high = stddev.
    // Fixed: low = the shared threshold. When absent, bounds come from the
    // calibration median rule (see resolve_threshold_params).
    std::optional<double> threshold_low;
    std::optional<double> threshold_high;
    RunMode mode = RunMode::Deterministic;
    std::uint64_t rng_seed = 0;  // Stochastic mode only
    int antigen_per_update = 1;  // cap per cell per step; overflow stays queued
    std::size_t store_capacity = 0;  // per-cell antigen cap, 0 = unbounded
    StepBackend backend = StepBackend::Parallel;
};

/// Resolved threshold-distribution parameters after the calibration rule
/// has filled in any absent bounds.
///   Uniform: a = low, b = high.  Gaussian: a = mean, b = stddev.
///   Fixed: a = the value, b unused.
struct ThresholdParams {
    ThresholdDistribution distribution = ThresholdDistribution::Uniform;
    double a = 0.0;
    double b = 0.0;
};

/// Fills in absent bounds from the calibration data: M = median of the
/// per-snapshot interim csm values, default range [0.5*M, 1.5*M] (Gaussian:
/// mean M, stddev M/4). All-zero calibration (M = 0) or an empty one is a
/// configuration error demanding explicit bounds.
ThresholdParams resolve_threshold_params(const PopulationConfig& config,
                                         std::span<const SignalSnapshot> calibration,
                                         const WeightMatrix& weights);

/// Draws the population's migration thresholds. Deterministic mode uses no
/// randomness: Uniform places thresholds at the midpoints
/// low + (i+0.5)*(high-low)/n, Gaussian at the quantile midpoints
/// mean + stddev*probit((i+0.5)/n). Stochastic mode samples the
/// distribution with the seeded generator.
std::vector<double> assign_thresholds(const PopulationConfig& config,
                                      std::span<const SignalSnapshot> calibration,
                                      const WeightMatrix& weights);

/// The shared per-step signal snapshot every cell reads.
struct SignalMatrix {
    SignalSnapshot current;
    long step = -1;
};

/// Antigen events waiting to be picked up by cells (FIFO).
struct AntigenPool {
    std::deque<AntigenEvent> pending;
};

struct StepAccounting {
    std::uint64_t ingested = 0;   // antigen events fed into the population
    std::uint64_t presented = 0;  // antigen instances carried by presentations
    std::uint64_t dropped = 0;    // instances dropped by the store capacity cap
};

struct RunState {
    std::vector<DendriticCell> cells;
    std::vector<Presentation> presentations;  // canonical (migration_time, cell_id) order
    SignalMatrix matrix;
    AntigenPool pool;
    long step = -1;
    StepAccounting totals;
    std::mt19937_64 rng;
    std::size_t round_robin_cursor = 0;

    std::uint64_t held_instances() const;    // antigen sitting in immature cells
    std::uint64_t queued_instances() const;  // antigen still in the pool
};

RunState init_population(const PopulationConfig& config, std::span<const double> thresholds);

/// One population step: update the signal matrix, distribute pending
/// antigen to cells (Deterministic: round-robin over cell ids with a cursor
/// that persists across steps; Stochastic: uniformly random among cells
/// with per-step capacity left), update every immature cell with the shared
/// snapshot, then migrate, log and reset every cell whose csm exceeds its
/// threshold. Cells reset here sample again from the next step.
void step_population(RunState& state, const SignalSnapshot& snapshot,
                     std::span<const AntigenEvent> events, const WeightMatrix& weights,
                     const PopulationConfig& config);

struct Diagnostics {
    long steps = 0;
    int cells = 0;
    std::uint64_t presentations = 0;
    std::uint64_t ingested_instances = 0;
    std::uint64_t presented_instances = 0;
    std::uint64_t held_instances = 0;
    std::uint64_t queued_instances = 0;
    std::uint64_t dropped_instances = 0;
    std::uint64_t unpresented_instances = 0;  // held + queued at end of run
};

struct RunResult {
    std::vector<Presentation> log;
    std::vector<McavReport> reports;
    Diagnostics diagnostics;
};

/// Drives the full pipeline: aligns the antigen stream onto the signal
/// steps (an event belongs to the step of the latest snapshot at or before
/// its timestamp; earlier events join the first step), iterates
/// step_population, then scores. Cells still immature at end of stream are
/// not flushed; their antigen is reported as unpresented and contributes a
/// NoData row when its type was never presented at all.
RunResult run(const SignalTrace& signals, std::span<const AntigenEvent> antigen,
              const WeightMatrix& weights, const PopulationConfig& config,
              double mcav_threshold = 0.5);

/// Canonical CSV serialization of a presentation log (header
/// "migration_time,cell_id,context,antigen"; antigen items joined by ';').
/// Byte-identical logs mean identical observable runs.
std::string serialize_log(std::span<const Presentation> log);

} // namespace dca
