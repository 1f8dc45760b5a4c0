#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dca/ingest.hpp"

namespace dca {

/// Synthetic host-monitoring scenario: a handful of normal process types
/// emitting antigen at steady rates, plus one scan type that only fires
/// inside the scan window. Signals follow two phases over seven columns
/// (pamp1, pamp2, danger1, danger2, safe1, safe2, inflammation): safe
/// columns dominate outside the window, pamp/danger spike inside it.
struct ScenarioSpec {
    long duration_steps = 1000;

    struct TypeActivity {
        std::string type;
        double rate = 0.0;  // expected events per step
    };
    std::vector<TypeActivity> normal_types;  // empty selects the defaults

    std::string scan_type = "pid-666";
    double scan_rate = 4.0;

    // Inclusive step range; absent means no scan happens at all.
    std::optional<std::pair<long, long>> scan_window = std::pair<long, long>{400, 600};

    // With the bystander flag on, the first normal type turns co-active
    // during the scan window at bystander_rate instead of its normal rate.
    bool bystander = false;
    double bystander_rate = 6.0;
};

ScenarioSpec default_scenario();

void validate_scenario(const ScenarioSpec& spec);  // throws ConfigError

/// The scenario in memory, exactly as parsing the emitted files would
/// reproduce it.
struct ScenarioData {
    SignalTrace trace;
    std::vector<AntigenEvent> events;
    std::vector<GroundTruthEntry> truth;
    SignalMapping mapping;
};

ScenarioData generate_scenario_data(const ScenarioSpec& spec, std::uint64_t seed);

struct ScenarioPaths {
    std::string signals;
    std::string antigen;
    std::string ground_truth;
    std::string mapping;
};

/// Writes signals.csv, antigen.csv, ground_truth.csv and the matching
/// mapping.csv under out_dir. Same spec and seed produce identical files.
ScenarioPaths generate_scenario(const ScenarioSpec& spec, std::uint64_t seed,
                                const std::string& out_dir);

} // namespace dca
