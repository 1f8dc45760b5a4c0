#include "dca/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dca/errors.hpp"

namespace dca {
namespace {

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double calibration_median_csm(std::span<const SignalSnapshot> calibration,
                              const WeightMatrix& weights) {
    if (calibration.empty()) {
        throw ConfigError("threshold bounds not given and calibration data is empty");
    }
    std::vector<double> csm;
    csm.reserve(calibration.size());
    for (const auto& snapshot : calibration) {
        csm.push_back(process_signals(snapshot, weights).csm);
    }
    const double m = median(std::move(csm));
    if (!(m > 0.0)) {
        throw ConfigError("calibration median csm is zero; supply explicit threshold bounds");
    }
    return m;
}

// Inverse standard normal CDF: Acklam's rational approximation followed by
// one Halley refinement against erfc.
double probit(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double low = 0.02425;

    double x;
    if (p < low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    constexpr double sqrt_two = 1.4142135623730951;
    constexpr double sqrt_two_pi = 2.5066282746310002;
    const double err = 0.5 * std::erfc(-x / sqrt_two) - p;
    const double u = err * sqrt_two_pi * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

// Gaussian draws can land at or below zero; thresholds must stay positive.
constexpr double kThresholdFloor = 1e-9;

} // namespace

ThresholdParams resolve_threshold_params(const PopulationConfig& config,
                                         std::span<const SignalSnapshot> calibration,
                                         const WeightMatrix& weights) {
    ThresholdParams params;
    params.distribution = config.threshold_distribution;
    switch (config.threshold_distribution) {
        case ThresholdDistribution::Fixed: {
            params.a = config.threshold_low ? *config.threshold_low
                                            : calibration_median_csm(calibration, weights);
            if (!(params.a > 0.0)) {
                throw ConfigError("fixed migration threshold must be positive");
            }
            break;
        }
        case ThresholdDistribution::Uniform: {
            if (config.threshold_low.has_value() != config.threshold_high.has_value()) {
                throw ConfigError("uniform threshold range needs both bounds (or neither)");
            }
            if (config.threshold_low) {
                params.a = *config.threshold_low;
                params.b = *config.threshold_high;
            } else {
                const double m = calibration_median_csm(calibration, weights);
                params.a = 0.5 * m;
                params.b = 1.5 * m;
            }
            if (!(params.a > 0.0 && params.a <= params.b)) {
                throw ConfigError("uniform threshold range requires 0 < low <= high");
            }
            break;
        }
        case ThresholdDistribution::Gaussian: {
            const bool derive = !config.threshold_low || !config.threshold_high;
            const double m = derive ? calibration_median_csm(calibration, weights) : 0.0;
            params.a = config.threshold_low ? *config.threshold_low : m;
            params.b = config.threshold_high ? *config.threshold_high : m / 4.0;
            if (!(params.a > 0.0) || !(params.b > 0.0)) {
                throw ConfigError("gaussian thresholds require positive mean and stddev");
            }
            break;
        }
    }
    return params;
}

std::vector<double> assign_thresholds(const PopulationConfig& config,
                                      std::span<const SignalSnapshot> calibration,
                                      const WeightMatrix& weights) {
    if (config.n_cells < 1) {
        throw ConfigError("population needs at least one cell");
    }
    const auto params = resolve_threshold_params(config, calibration, weights);
    const std::size_t n = static_cast<std::size_t>(config.n_cells);

    std::vector<double> thresholds;
    thresholds.reserve(n);

    if (params.distribution == ThresholdDistribution::Fixed) {
        thresholds.assign(n, params.a);
        return thresholds;
    }

    if (config.mode == RunMode::Deterministic) {
        // No sampling: spread the population over the distribution's
        // midpoint grid instead.
        for (std::size_t i = 0; i < n; ++i) {
            const double fraction = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            double value;
            if (params.distribution == ThresholdDistribution::Uniform) {
                value = params.a + fraction * (params.b - params.a);
            } else {
                value = params.a + params.b * probit(fraction);
            }
            thresholds.push_back(std::max(value, kThresholdFloor));
        }
    } else {
        std::mt19937_64 rng(config.rng_seed);
        if (params.distribution == ThresholdDistribution::Uniform) {
            std::uniform_real_distribution<double> draw(params.a, params.b);
            for (std::size_t i = 0; i < n; ++i) thresholds.push_back(draw(rng));
        } else {
            std::normal_distribution<double> draw(params.a, params.b);
            for (std::size_t i = 0; i < n; ++i) {
                thresholds.push_back(std::max(draw(rng), kThresholdFloor));
            }
        }
    }
    return thresholds;
}

std::uint64_t RunState::held_instances() const {
    std::uint64_t held = 0;
    for (const auto& cell : cells) held += cell.antigen_store.size();
    return held;
}

std::uint64_t RunState::queued_instances() const {
    return pool.pending.size();
}

RunState init_population(const PopulationConfig& config, std::span<const double> thresholds) {
    if (config.n_cells < 1) {
        throw ConfigError("population needs at least one cell");
    }
    if (config.antigen_per_update < 1) {
        throw ConfigError("antigen_per_update must be at least 1");
    }
    if (thresholds.size() != static_cast<std::size_t>(config.n_cells)) {
        throw ConfigError("threshold count does not match the population size");
    }
    RunState state;
    state.cells.reserve(thresholds.size());
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] > 0.0)) {
            throw ConfigError("migration thresholds must be positive");
        }
        state.cells.push_back(make_cell(static_cast<int>(i), thresholds[i],
                                        config.store_capacity));
    }
    // Distinct stream from the threshold sampler, which consumes the raw seed.
    state.rng.seed(config.rng_seed + 1);
    return state;
}

namespace {

// Moves antigen out of the pool into per-cell batches for this step.
// Whatever exceeds the per-step capacity n_cells * antigen_per_update stays
// queued for the next step.
std::vector<std::vector<std::string>> distribute_antigen(RunState& state,
                                                         const PopulationConfig& config) {
    const std::size_t n = state.cells.size();
    const std::size_t cap = static_cast<std::size_t>(config.antigen_per_update);
    std::vector<std::vector<std::string>> batches(n);
    auto& pending = state.pool.pending;

    if (config.mode == RunMode::Deterministic) {
        std::size_t assigned = 0;
        const std::size_t max_assignable = n * cap;
        while (!pending.empty() && assigned < max_assignable) {
            while (batches[state.round_robin_cursor].size() >= cap) {
                state.round_robin_cursor = (state.round_robin_cursor + 1) % n;
            }
            batches[state.round_robin_cursor].push_back(std::move(pending.front().antigen_type));
            pending.pop_front();
            ++assigned;
            state.round_robin_cursor = (state.round_robin_cursor + 1) % n;
        }
    } else {
        // Uniformly random among the cells that still have capacity left.
        std::vector<std::size_t> open(n);
        std::iota(open.begin(), open.end(), std::size_t{0});
        while (!pending.empty() && !open.empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
            const std::size_t slot = pick(state.rng);
            const std::size_t cell = open[slot];
            batches[cell].push_back(std::move(pending.front().antigen_type));
            pending.pop_front();
            if (batches[cell].size() >= cap) {
                open[slot] = open.back();
                open.pop_back();
            }
        }
    }
    return batches;
}

} // namespace

void step_population(RunState& state, const SignalSnapshot& snapshot,
                     std::span<const AntigenEvent> events, const WeightMatrix& weights,
                     const PopulationConfig& config) {
    detail::contract(!state.cells.empty(), "step on an empty population");

    state.step += 1;
    state.matrix.current = snapshot;
    state.matrix.step = state.step;

    for (const auto& event : events) {
        state.pool.pending.push_back(event);
    }
    state.totals.ingested += events.size();

    const auto batches = distribute_antigen(state, config);

    // Per-cell kernel. Cells are exclusively owned, the snapshot is shared
    // read-only and results are committed in cell-id order below, so the
    // parallel backend is observably identical to the serial one.
    const std::size_t n = state.cells.size();
    std::vector<std::size_t> dropped(n, 0);
    std::vector<char> migrated(n, 0);
    std::vector<Presentation> staged(n);

    auto process_cell = [&](std::size_t i) {
        DendriticCell& cell = state.cells[i];
        dropped[i] = update_cell(cell, snapshot, batches[i], weights);
        if (check_migration(cell)) {
            staged[i] = present(cell, state.step);
            reset_cell(cell);
            migrated[i] = 1;
        }
    };

#ifdef DCA_HAVE_OPENMP
    if (config.backend == StepBackend::Parallel) {
        #pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            process_cell(static_cast<std::size_t>(i));
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) process_cell(i);
    }
#else
    for (std::size_t i = 0; i < n; ++i) process_cell(i);
#endif

    for (std::size_t i = 0; i < n; ++i) {
        state.totals.dropped += dropped[i];
        if (migrated[i]) {
            state.totals.presented += staged[i].antigen.size();
            state.presentations.push_back(std::move(staged[i]));
        }
    }
}

RunResult run(const SignalTrace& signals, std::span<const AntigenEvent> antigen,
              const WeightMatrix& weights, const PopulationConfig& config,
              double mcav_threshold) {
    if (!(mcav_threshold >= 0.0 && mcav_threshold <= 1.0)) {
        throw ConfigError("mcav threshold must lie in [0, 1]");
    }
    detail::contract(signals.times.size() == signals.snapshots.size(),
                     "signal trace times and snapshots differ in length");
    for (std::size_t i = 1; i < signals.times.size(); ++i) {
        if (signals.times[i] < signals.times[i - 1]) {
            throw IngestError("signal stream is not time-ordered");
        }
    }
    for (std::size_t i = 1; i < antigen.size(); ++i) {
        if (antigen[i].timestamp < antigen[i - 1].timestamp) {
            throw IngestError("antigen stream is not time-ordered");
        }
    }

    const auto thresholds = assign_thresholds(config, signals.snapshots, weights);
    RunState state = init_population(config, thresholds);

    // Discretize the antigen stream onto the signal steps: an event belongs
    // to the step of the latest snapshot at or before its timestamp; events
    // predating the first snapshot join step 0.
    std::size_t next_event = 0;
    std::vector<AntigenEvent> step_events;
    for (std::size_t t = 0; t < signals.size(); ++t) {
        step_events.clear();
        const bool last = t + 1 == signals.size();
        while (next_event < antigen.size() &&
               (last || antigen[next_event].timestamp < signals.times[t + 1])) {
            step_events.push_back(antigen[next_event]);
            ++next_event;
        }
        step_population(state, signals.snapshots[t], step_events, weights, config);
    }

    std::vector<std::string> known_types;
    known_types.reserve(antigen.size());
    for (const auto& event : antigen) known_types.push_back(event.antigen_type);

    RunResult result;
    result.reports = compute_mcav(state.presentations, known_types);
    classify(result.reports, mcav_threshold);

    result.diagnostics.steps = static_cast<long>(signals.size());
    result.diagnostics.cells = config.n_cells;
    result.diagnostics.presentations = state.presentations.size();
    result.diagnostics.ingested_instances = state.totals.ingested;
    result.diagnostics.presented_instances = state.totals.presented;
    result.diagnostics.held_instances = state.held_instances();
    result.diagnostics.queued_instances = state.queued_instances();
    result.diagnostics.dropped_instances = state.totals.dropped;
    result.diagnostics.unpresented_instances =
        result.diagnostics.held_instances + result.diagnostics.queued_instances;

    result.log = std::move(state.presentations);
    return result;
}

std::string serialize_log(std::span<const Presentation> log) {
    std::string out = "migration_time,cell_id,context,antigen\n";
    for (const auto& presentation : log) {
        out += std::to_string(presentation.migration_time);
        out += ',';
        out += std::to_string(presentation.cell_id);
        out += ',';
        out += std::to_string(presentation.context);
        out += ',';
        for (std::size_t i = 0; i < presentation.antigen.size(); ++i) {
            if (i > 0) out += ';';
            out += presentation.antigen[i];
        }
        out += '\n';
    }
    return out;
}

} // namespace dca
