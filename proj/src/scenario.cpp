#include "dca/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <unordered_set>

#include "dca/errors.hpp"

namespace dca {

ScenarioSpec default_scenario() {
    ScenarioSpec spec;
    spec.normal_types = {{"pid-101", 2.0}, {"pid-102", 2.0}, {"pid-103", 2.0}};
    return spec;
}

void validate_scenario(const ScenarioSpec& spec) {
    if (spec.duration_steps < 1) {
        throw ConfigError("scenario needs at least one step");
    }
    std::unordered_set<std::string> names;
    for (const auto& activity : spec.normal_types) {
        if (activity.type.empty()) {
            throw ConfigError("scenario has an unnamed normal type");
        }
        if (!(activity.rate >= 0.0)) {
            throw ConfigError("scenario type '" + activity.type + "' needs a rate >= 0");
        }
        if (!names.insert(activity.type).second) {
            throw ConfigError("scenario lists type '" + activity.type + "' twice");
        }
    }
    if (spec.scan_type.empty()) {
        throw ConfigError("scenario scan type is unnamed");
    }
    if (names.count(spec.scan_type) > 0) {
        throw ConfigError("scan type collides with a normal type");
    }
    if (!(spec.scan_rate >= 0.0) || !(spec.bystander_rate >= 0.0)) {
        throw ConfigError("scenario rates must be >= 0");
    }
    if (spec.scan_window) {
        const auto [start, end] = *spec.scan_window;
        if (start < 0 || start > end || end >= spec.duration_steps) {
            throw ConfigError("scan window must satisfy 0 <= start <= end < steps");
        }
    }
    if (spec.bystander && spec.normal_types.empty()) {
        throw ConfigError("bystander flag needs at least one normal type");
    }
}

namespace {

// Render with fixed precision, then take the reparsed value as the truth:
// the in-memory scenario is exactly what a reader of the emitted file sees.
struct Quantized {
    char text[32];
    double value;
};

Quantized quantize(double x) {
    Quantized q;
    std::snprintf(q.text, sizeof q.text, "%.4f", x);
    q.value = std::strtod(q.text, nullptr);
    return q;
}

struct Phase {
    double base;
    double noise;
};

struct ColumnProfile {
    const char* name;
    SignalCategory category;
    double max_value;
    Phase baseline;
    Phase scan;
};

// Seven columns mirroring a host monitor: error/reset counters as PAMP,
// traffic volume as danger, steady-behaviour attributes as safe, plus a
// remote-login inflammation flag (constant 0 here).
constexpr ColumnProfile kColumns[] = {
    {"pamp1", SignalCategory::Pamp, 100.0, {0.0, 1.0}, {70.0, 10.0}},
    {"pamp2", SignalCategory::Pamp, 100.0, {0.0, 1.0}, {70.0, 10.0}},
    {"danger1", SignalCategory::Danger, 100.0, {2.0, 2.0}, {50.0, 10.0}},
    {"danger2", SignalCategory::Danger, 100.0, {2.0, 2.0}, {50.0, 10.0}},
    {"safe1", SignalCategory::Safe, 100.0, {40.0, 5.0}, {5.0, 2.0}},
    {"safe2", SignalCategory::Safe, 100.0, {40.0, 5.0}, {5.0, 2.0}},
    {"inflammation", SignalCategory::Inflammation, 1.0, {0.0, 0.0}, {0.0, 0.0}},
};

struct GeneratedScenario {
    ScenarioData data;
    std::string signals_csv;
    std::string antigen_csv;
    std::string truth_csv;
    std::string mapping_csv;
};

long event_count(double rate, std::mt19937_64& rng) {
    const double whole = std::floor(rate);
    const double fraction = rate - whole;
    long count = static_cast<long>(whole);
    if (fraction > 0.0) {
        std::uniform_real_distribution<double> draw(0.0, 1.0);
        if (draw(rng) < fraction) ++count;
    }
    return count;
}

GeneratedScenario generate(const ScenarioSpec& raw_spec, std::uint64_t seed) {
    ScenarioSpec spec = raw_spec;
    if (spec.normal_types.empty()) {
        spec.normal_types = default_scenario().normal_types;
    }
    validate_scenario(spec);

    GeneratedScenario out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SignalMapping& mapping = out.data.mapping;
    out.mapping_csv = "column,category,max\n";
    char max_text[32];
    for (const auto& column : kColumns) {
        mapping.rules.push_back({column.name, column.category, column.max_value});
        std::snprintf(max_text, sizeof max_text, "%g", column.max_value);
        out.mapping_csv += std::string(column.name) + "," + to_string(column.category) + "," +
                           max_text + "\n";
    }

    out.signals_csv = "time";
    for (const auto& column : kColumns) {
        out.signals_csv += ",";
        out.signals_csv += column.name;
    }
    out.signals_csv += "\n";
    out.antigen_csv = "time,antigen_type\n";

    const bool scan_active = spec.scan_window.has_value() && spec.scan_rate > 0.0;
    for (long t = 0; t < spec.duration_steps; ++t) {
        const bool in_window = spec.scan_window && t >= spec.scan_window->first &&
                               t <= spec.scan_window->second;

        const std::string step_text = std::to_string(t);
        out.signals_csv += step_text;
        SignalSnapshot snapshot;
        for (std::size_t c = 0; c < std::size(kColumns); ++c) {
            const ColumnProfile& column = kColumns[c];
            const Phase& phase = in_window ? column.scan : column.baseline;
            const double noise = phase.noise > 0.0 ? unit(rng) * phase.noise : 0.0;
            const Quantized q = quantize(phase.base + noise);
            out.signals_csv += ",";
            out.signals_csv += q.text;
            const double value = normalize_value(q.value, mapping.rules[c]);
            switch (column.category) {
                case SignalCategory::Pamp: snapshot.pamp.push_back(value); break;
                case SignalCategory::Danger: snapshot.danger.push_back(value); break;
                case SignalCategory::Safe: snapshot.safe.push_back(value); break;
                case SignalCategory::Inflammation: snapshot.inflammation = value; break;
            }
        }
        out.signals_csv += "\n";
        out.data.trace.times.push_back(static_cast<double>(t));
        out.data.trace.snapshots.push_back(std::move(snapshot));

        for (std::size_t i = 0; i < spec.normal_types.size(); ++i) {
            double rate = spec.normal_types[i].rate;
            if (spec.bystander && i == 0 && in_window) rate = spec.bystander_rate;
            const long count = event_count(rate, rng);
            for (long k = 0; k < count; ++k) {
                out.antigen_csv += step_text + "," + spec.normal_types[i].type + "\n";
                out.data.events.push_back({static_cast<double>(t), spec.normal_types[i].type});
            }
        }
        if (in_window) {
            const long count = event_count(spec.scan_rate, rng);
            for (long k = 0; k < count; ++k) {
                out.antigen_csv += step_text + "," + spec.scan_type + "\n";
                out.data.events.push_back({static_cast<double>(t), spec.scan_type});
            }
        }
    }

    out.truth_csv = "antigen_type,label\n";
    for (const auto& activity : spec.normal_types) {
        out.truth_csv += activity.type + ",normal\n";
        out.data.truth.push_back({activity.type, false});
    }
    if (scan_active) {
        out.truth_csv += spec.scan_type + ",anomalous\n";
        out.data.truth.push_back({spec.scan_type, true});
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw IngestError("cannot write '" + path + "'");
    }
    file << content;
    if (!file.good()) {
        throw IngestError("failed writing '" + path + "'");
    }
}

} // namespace

ScenarioData generate_scenario_data(const ScenarioSpec& spec, std::uint64_t seed) {
    return generate(spec, seed).data;
}

ScenarioPaths generate_scenario(const ScenarioSpec& spec, std::uint64_t seed,
                                const std::string& out_dir) {
    auto generated = generate(spec, seed);

    std::filesystem::create_directories(out_dir);
    ScenarioPaths paths;
    paths.signals = (std::filesystem::path(out_dir) / "signals.csv").string();
    paths.antigen = (std::filesystem::path(out_dir) / "antigen.csv").string();
    paths.ground_truth = (std::filesystem::path(out_dir) / "ground_truth.csv").string();
    paths.mapping = (std::filesystem::path(out_dir) / "mapping.csv").string();

    write_file(paths.signals, generated.signals_csv);
    write_file(paths.antigen, generated.antigen_csv);
    write_file(paths.ground_truth, generated.truth_csv);
    write_file(paths.mapping, generated.mapping_csv);
    return paths;
}

} // namespace dca
