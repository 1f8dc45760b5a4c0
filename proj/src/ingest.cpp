#include "dca/ingest.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_set>

#include "dca/errors.hpp"

namespace dca {

const char* to_string(SignalCategory category) {
    switch (category) {
        case SignalCategory::Pamp: return "PAMP";
        case SignalCategory::Danger: return "DANGER";
        case SignalCategory::Safe: return "SAFE";
        case SignalCategory::Inflammation: return "INFLAMMATION";
    }
    return "?";
}

SignalCategory parse_category(const std::string& text) {
    if (text == "PAMP") return SignalCategory::Pamp;
    if (text == "DANGER") return SignalCategory::Danger;
    if (text == "SAFE") return SignalCategory::Safe;
    if (text == "INFLAMMATION") return SignalCategory::Inflammation;
    throw ConfigError("unknown signal category '" + text +
                      "' (expected PAMP, DANGER, SAFE or INFLAMMATION)");
}

const ColumnRule* SignalMapping::find(const std::string& column) const {
    for (const auto& rule : rules) {
        if (rule.column == column) return &rule;
    }
    return nullptr;
}

void validate_mapping(const SignalMapping& mapping) {
    if (mapping.rules.empty()) {
        throw ConfigError("signal mapping is empty");
    }
    std::unordered_set<std::string> seen;
    int inflammation_columns = 0;
    for (const auto& rule : mapping.rules) {
        if (rule.column.empty()) {
            throw ConfigError("signal mapping contains an unnamed column");
        }
        if (rule.column == "time") {
            throw ConfigError("the time column must not appear in the signal mapping");
        }
        if (!seen.insert(rule.column).second) {
            throw ConfigError("signal mapping lists column '" + rule.column + "' twice");
        }
        if (!(rule.max_value > 0.0)) {
            throw ConfigError("signal mapping column '" + rule.column +
                              "' needs a positive max");
        }
        if (rule.category == SignalCategory::Inflammation) ++inflammation_columns;
    }
    if (inflammation_columns > 1) {
        throw ConfigError("signal mapping allows at most one INFLAMMATION column");
    }
}

double normalize_value(double raw, const ColumnRule& rule) {
    const double clamped = std::min(std::max(raw, 0.0), rule.max_value);
    const double scale = rule.category == SignalCategory::Inflammation ? 1.0 : 100.0;
    return clamped / rule.max_value * scale;
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

struct Line {
    std::size_t number = 0;  // physical 1-based line in the source
    std::string text;
};

// Reads non-empty lines, stripping a trailing '\r' so CRLF input parses too.
std::vector<Line> read_lines(std::istream& in) {
    std::vector<Line> lines;
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back({number, line});
    }
    return lines;
}

double parse_number(const std::string& cell, const std::string& source, std::size_t line,
                    const std::string& column) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw IngestError(source + ": line " + std::to_string(line) + ", column '" + column +
                          "': non-numeric value '" + cell + "'");
    }
    return value;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw IngestError("cannot open '" + path + "'");
    }
    return file;
}

} // namespace

SignalMapping parse_mapping_file(const std::string& path) {
    auto file = open_or_throw(path);
    return parse_mapping(file, path);
}

SignalMapping parse_mapping(std::istream& in, const std::string& source_name) {
    const auto lines = read_lines(in);
    if (lines.empty() ||
        split_row(lines[0].text) != std::vector<std::string>{"column", "category", "max"}) {
        throw IngestError(source_name + ": expected header 'column,category,max'");
    }
    SignalMapping mapping;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_row(lines[i].text);
        if (cells.size() != 3) {
            throw IngestError(source_name + ": line " + std::to_string(lines[i].number) +
                              ": expected 3 cells, got " + std::to_string(cells.size()));
        }
        ColumnRule rule;
        rule.column = cells[0];
        rule.category = parse_category(cells[1]);
        rule.max_value = parse_number(cells[2], source_name, lines[i].number, "max");
        mapping.rules.push_back(std::move(rule));
    }
    validate_mapping(mapping);
    return mapping;
}

SignalTrace parse_signal_stream(const std::string& path, const SignalMapping& mapping) {
    auto file = open_or_throw(path);
    return parse_signals(file, mapping, path);
}

SignalTrace parse_signals(std::istream& in, const SignalMapping& mapping,
                          const std::string& source_name) {
    validate_mapping(mapping);

    const auto lines = read_lines(in);
    if (lines.empty()) {
        throw IngestError(source_name + ": missing header row");
    }
    const auto header = split_row(lines[0].text);
    if (header.empty() || header[0] != "time") {
        throw IngestError(source_name + ": header must begin with 'time'");
    }

    // Route each header column to its category; positions within a category
    // follow header order.
    std::vector<const ColumnRule*> rules;
    rules.reserve(header.size() - 1);
    for (std::size_t c = 1; c < header.size(); ++c) {
        const ColumnRule* rule = mapping.find(header[c]);
        if (rule == nullptr) {
            throw ConfigError(source_name + ": signal column '" + header[c] +
                              "' has no mapping entry");
        }
        rules.push_back(rule);
    }
    for (const auto& rule : mapping.rules) {
        if (std::find(header.begin() + 1, header.end(), rule.column) == header.end()) {
            throw ConfigError(source_name + ": mapping column '" + rule.column +
                              "' is missing from the signal file header");
        }
    }

    SignalTrace trace;
    trace.times.reserve(lines.size() - 1);
    trace.snapshots.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_row(lines[i].text);
        const std::size_t line = lines[i].number;
        if (cells.size() != header.size()) {
            throw IngestError(source_name + ": line " + std::to_string(line) + ": expected " +
                              std::to_string(header.size()) + " cells, got " +
                              std::to_string(cells.size()));
        }
        const double time = parse_number(cells[0], source_name, line, "time");
        if (!trace.times.empty() && time < trace.times.back()) {
            throw IngestError(source_name + ": line " + std::to_string(line) +
                              ", column 'time': decreasing timestamp");
        }

        SignalSnapshot snapshot;
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const ColumnRule& rule = *rules[c - 1];
            const double raw = parse_number(cells[c], source_name, line, rule.column);
            if (raw < 0.0) {
                throw IngestError(source_name + ": line " + std::to_string(line) + ", column '" +
                                  rule.column + "': negative value");
            }
            const double value = normalize_value(raw, rule);
            switch (rule.category) {
                case SignalCategory::Pamp: snapshot.pamp.push_back(value); break;
                case SignalCategory::Danger: snapshot.danger.push_back(value); break;
                case SignalCategory::Safe: snapshot.safe.push_back(value); break;
                case SignalCategory::Inflammation: snapshot.inflammation = value; break;
            }
        }
        trace.times.push_back(time);
        trace.snapshots.push_back(std::move(snapshot));
    }
    return trace;
}

std::vector<AntigenEvent> parse_antigen_stream(const std::string& path) {
    auto file = open_or_throw(path);
    return parse_antigen(file, path);
}

std::vector<AntigenEvent> parse_antigen(std::istream& in, const std::string& source_name) {
    const auto lines = read_lines(in);
    if (lines.empty() ||
        split_row(lines[0].text) != std::vector<std::string>{"time", "antigen_type"}) {
        throw IngestError(source_name + ": expected header 'time,antigen_type'");
    }
    std::vector<AntigenEvent> events;
    events.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_row(lines[i].text);
        const std::size_t line = lines[i].number;
        if (cells.size() != 2) {
            throw IngestError(source_name + ": line " + std::to_string(line) +
                              ": expected 2 cells, got " + std::to_string(cells.size()));
        }
        AntigenEvent event;
        event.timestamp = parse_number(cells[0], source_name, line, "time");
        event.antigen_type = cells[1];
        if (event.antigen_type.empty()) {
            throw IngestError(source_name + ": line " + std::to_string(line) +
                              ", column 'antigen_type': empty type");
        }
        if (!events.empty() && event.timestamp < events.back().timestamp) {
            throw IngestError(source_name + ": line " + std::to_string(line) +
                              ", column 'time': decreasing timestamp");
        }
        events.push_back(std::move(event));
    }
    return events;
}

std::vector<GroundTruthEntry> parse_ground_truth_file(const std::string& path) {
    auto file = open_or_throw(path);
    return parse_ground_truth(file, path);
}

std::vector<GroundTruthEntry> parse_ground_truth(std::istream& in,
                                                 const std::string& source_name) {
    const auto lines = read_lines(in);
    if (lines.empty() ||
        split_row(lines[0].text) != std::vector<std::string>{"antigen_type", "label"}) {
        throw IngestError(source_name + ": expected header 'antigen_type,label'");
    }
    std::vector<GroundTruthEntry> entries;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_row(lines[i].text);
        const std::size_t line = lines[i].number;
        if (cells.size() != 2) {
            throw IngestError(source_name + ": line " + std::to_string(line) +
                              ": expected 2 cells, got " + std::to_string(cells.size()));
        }
        GroundTruthEntry entry;
        entry.antigen_type = cells[0];
        if (cells[1] == "normal") {
            entry.anomalous = false;
        } else if (cells[1] == "anomalous") {
            entry.anomalous = true;
        } else {
            throw IngestError(source_name + ": line " + std::to_string(line) +
                              ", column 'label': expected normal or anomalous, got '" +
                              cells[1] + "'");
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

} // namespace dca
