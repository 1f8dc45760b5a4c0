#include "dca/scoring.hpp"

#include <cstdio>
#include <map>

#include "dca/errors.hpp"

namespace dca {

const char* to_string(Label label) {
    switch (label) {
        case Label::Normal: return "normal";
        case Label::Anomalous: return "anomalous";
        case Label::NoData: return "nodata";
    }
    return "?";
}

namespace {

struct Tally {
    std::uint64_t mature = 0;
    std::uint64_t semi = 0;
};

std::vector<McavReport> reports_from(const std::map<std::string, Tally>& tallies) {
    std::vector<McavReport> reports;
    reports.reserve(tallies.size());
    for (const auto& [type, tally] : tallies) {
        McavReport report;
        report.antigen_type = type;
        report.mature_count = tally.mature;
        report.semi_count = tally.semi;
        report.total = tally.mature + tally.semi;
        if (report.total > 0) {
            report.mcav = static_cast<double>(tally.mature) / static_cast<double>(report.total);
            report.label = Label::Normal;
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

} // namespace

std::vector<McavReport> compute_mcav(std::span<const Presentation> log) {
    return compute_mcav(log, {});
}

std::vector<McavReport> compute_mcav(std::span<const Presentation> log,
                                     std::span<const std::string> known_types) {
    std::map<std::string, Tally> tallies;
    for (const auto& type : known_types) {
        tallies.try_emplace(type);
    }
    for (const auto& presentation : log) {
        for (const auto& type : presentation.antigen) {
            auto& tally = tallies[type];
            if (presentation.context == 1) {
                ++tally.mature;
            } else {
                ++tally.semi;
            }
        }
    }
    return reports_from(tallies);
}

void classify(std::vector<McavReport>& reports, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw ConfigError("mcav threshold must lie in [0, 1]");
    }
    for (auto& report : reports) {
        if (report.total == 0) continue;  // NoData stays NoData
        report.label = *report.mcav > threshold ? Label::Anomalous : Label::Normal;
    }
}

std::vector<std::vector<McavReport>> compute_mcav_segments(std::span<const Presentation> log,
                                                           std::uint64_t segment_size) {
    if (segment_size == 0) {
        throw ConfigError("segment size must be positive");
    }
    std::vector<std::vector<McavReport>> segments;
    std::map<std::string, Tally> tallies;
    std::uint64_t in_segment = 0;
    for (const auto& presentation : log) {
        for (const auto& type : presentation.antigen) {
            auto& tally = tallies[type];
            if (presentation.context == 1) {
                ++tally.mature;
            } else {
                ++tally.semi;
            }
            if (++in_segment == segment_size) {
                segments.push_back(reports_from(tallies));
                tallies.clear();
                in_segment = 0;
            }
        }
    }
    if (in_segment > 0) {
        segments.push_back(reports_from(tallies));
    }
    return segments;
}

std::string serialize_reports(std::span<const McavReport> reports) {
    std::string out = "antigen_type,mature_count,semi_count,total,mcav,label\n";
    char buffer[64];
    for (const auto& report : reports) {
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
    return out;
}

} // namespace dca
