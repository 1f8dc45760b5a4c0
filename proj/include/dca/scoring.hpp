#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dca/cell.hpp"

namespace dca {

enum class Label { Normal, Anomalous, NoData };

const char* to_string(Label label);

/// Per-antigen-type tally of presented instances and the resulting anomaly
/// coefficient. mcav is absent (never 0) for types with no presented
/// instances; such rows carry the NoData label and are left alone by
/// classification.
struct McavReport {
    std::string antigen_type;
    std::uint64_t mature_count = 0;
    std::uint64_t semi_count = 0;
    std::uint64_t total = 0;
    std::optional<double> mcav;
    Label label = Label::NoData;
};

/// Tallies antigen instances (not presentation events): every antigen item
/// inside a presentation counts once toward its type, under the
/// presentation's context. One report per distinct type, sorted
/// lexicographically by type.
std::vector<McavReport> compute_mcav(std::span<const Presentation> log);

/// Same, but also emits a NoData row for every known type that never
/// appears in the log (e.g. antigen ingested but still held when the
/// streams ended).
std::vector<McavReport> compute_mcav(std::span<const Presentation> log,
                                     std::span<const std::string> known_types);

/// Applies the anomaly threshold: label = Anomalous iff mcav strictly
/// exceeds it; ties stay Normal; NoData rows are untouched.
/// Throws ConfigError unless 0 <= threshold <= 1.
void classify(std::vector<McavReport>& reports, double threshold);

/// Segmented scoring: the instance stream (log order, presentation items
/// flattened) is cut into consecutive segments of segment_size instances,
/// the last one possibly shorter, and each segment is tallied on its own.
std::vector<std::vector<McavReport>> compute_mcav_segments(std::span<const Presentation> log,
                                                           std::uint64_t segment_size);

/// CSV serialization, header "antigen_type,mature_count,semi_count,total,
/// mcav,label". NoData rows carry an empty mcav field.
std::string serialize_reports(std::span<const McavReport> reports);

} // namespace dca
