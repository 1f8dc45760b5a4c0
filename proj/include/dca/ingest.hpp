#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dca/signals.hpp"

namespace dca {

enum class SignalCategory { Pamp, Danger, Safe, Inflammation };

const char* to_string(SignalCategory category);
SignalCategory parse_category(const std::string& text);  // throws ConfigError

/// How one raw signal column feeds the engine: its category and the
/// per-column maximum for min-max normalization. Raw values are clamped to
/// [0, max] then scaled to [0, 100] -- except inflammation, which is a
/// multiplier rather than a magnitude and scales to [0, 1].
struct ColumnRule {
    std::string column;
    SignalCategory category;
    double max_value = 0.0;
};

struct SignalMapping {
    std::vector<ColumnRule> rules;

    const ColumnRule* find(const std::string& column) const;
};

/// Checks the mapping invariants: non-empty, positive maxima, unique column
/// names, at most one inflammation column. Throws ConfigError.
void validate_mapping(const SignalMapping& mapping);

double normalize_value(double raw, const ColumnRule& rule);

/// A timestamped occurrence of one antigen type (an opaque identifier such
/// as a process ID).
struct AntigenEvent {
    double timestamp = 0.0;
    std::string antigen_type;
};

/// Parsed signal stream: one snapshot per file row plus its timestamp.
struct SignalTrace {
    std::vector<double> times;
    std::vector<SignalSnapshot> snapshots;

    std::size_t size() const { return snapshots.size(); }
};

struct GroundTruthEntry {
    std::string antigen_type;
    bool anomalous = false;
};

// File formats (comma-separated, LF line endings, '.' decimal separator):
//   signals:      header "time,<col>,...", one row per time step
//   antigen:      header "time,antigen_type"
//   mapping:      header "column,category,max", category PAMP|DANGER|SAFE|INFLAMMATION
//   ground truth: header "antigen_type,label", label normal|anomalous

SignalMapping parse_mapping_file(const std::string& path);
SignalMapping parse_mapping(std::istream& in, const std::string& source_name);

SignalTrace parse_signal_stream(const std::string& path, const SignalMapping& mapping);
SignalTrace parse_signals(std::istream& in, const SignalMapping& mapping,
                          const std::string& source_name);

std::vector<AntigenEvent> parse_antigen_stream(const std::string& path);
std::vector<AntigenEvent> parse_antigen(std::istream& in, const std::string& source_name);

std::vector<GroundTruthEntry> parse_ground_truth_file(const std::string& path);
std::vector<GroundTruthEntry> parse_ground_truth(std::istream& in,
                                                 const std::string& source_name);

} // namespace dca
