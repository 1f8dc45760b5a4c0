#include <doctest.h>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "dca/cell.hpp"
#include "dca/errors.hpp"
#include "dca/scoring.hpp"

using dca::Label;
using dca::McavReport;
using dca::Presentation;

namespace {

std::vector<Presentation> random_log(std::mt19937_64& rng, int max_presentations = 60) {
    std::uniform_int_distribution<int> n_dist(0, max_presentations);
    std::uniform_int_distribution<int> context(0, 1);
    std::uniform_int_distribution<int> type(0, 5);
    std::uniform_int_distribution<int> items(0, 6);
    std::vector<Presentation> log;
    const int n = n_dist(rng);
    for (int i = 0; i < n; ++i) {
        Presentation p;
        p.cell_id = i;
        p.context = context(rng);
        p.migration_time = i;
        for (int k = items(rng); k > 0; --k) {
            p.antigen.push_back("t" + std::to_string(type(rng)));
        }
        log.push_back(std::move(p));
    }
    return log;
}

// Flattens the log into (type, context) pairs and tallies them without any
// of the production bookkeeping.
std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> flatten_tally(
    const std::vector<Presentation>& log) {
    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> tally;
    for (const auto& p : log) {
        for (const auto& type : p.antigen) {
            auto& [mature, total] = tally[type];
            mature += p.context;
            total += 1;
        }
    }
    return tally;
}

Presentation make_presentation(int context, std::vector<std::string> antigen) {
    Presentation p;
    p.context = context;
    p.antigen = std::move(antigen);
    return p;
}

} // namespace

TEST_CASE("mcav counts antigen instances, not presentations") {
    std::vector<Presentation> log;
    log.push_back(make_presentation(1, {"A", "A", "A"}));
    log.push_back(make_presentation(0, {"A"}));
    const auto reports = dca::compute_mcav(log);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].antigen_type == "A");
    CHECK(reports[0].mature_count == 3);
    CHECK(reports[0].semi_count == 1);
    CHECK(reports[0].total == 4);
    CHECK(*reports[0].mcav == 0.75);
}

TEST_CASE("reports come out sorted by antigen type") {
    std::vector<Presentation> log;
    log.push_back(make_presentation(0, {"zeta", "alpha"}));
    log.push_back(make_presentation(1, {"mid"}));
    const auto reports = dca::compute_mcav(log);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].antigen_type == "alpha");
    CHECK(reports[1].antigen_type == "mid");
    CHECK(reports[2].antigen_type == "zeta");
}

TEST_CASE("mcav matches the flatten-and-tally oracle on random logs") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        const auto log = random_log(rng);
        const auto tally = flatten_tally(log);
        const auto reports = dca::compute_mcav(log);
        REQUIRE(reports.size() == tally.size());
        for (const auto& report : reports) {
            const auto& [mature, total] = tally.at(report.antigen_type);
            CHECK(report.mature_count == mature);
            CHECK(report.total == total);
            REQUIRE(report.mcav.has_value());
            CHECK(*report.mcav == static_cast<double>(mature) / static_cast<double>(total));
            CHECK(*report.mcav >= 0.0);
            CHECK(*report.mcav <= 1.0);
        }
    }
}

TEST_CASE("known types that were never presented produce NoData rows") {
    std::vector<Presentation> log;
    log.push_back(make_presentation(1, {"seen"}));
    const std::vector<std::string> known = {"seen", "ghost"};
    const auto reports = dca::compute_mcav(log, known);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].antigen_type == "ghost");
    CHECK(reports[0].total == 0);
    CHECK_FALSE(reports[0].mcav.has_value());
    CHECK(reports[0].label == Label::NoData);
    CHECK(reports[1].antigen_type == "seen");
    CHECK(reports[1].total == 1);
}

TEST_CASE("classification is strictly above the threshold") {
    std::vector<Presentation> log;
    log.push_back(make_presentation(1, {"half"}));
    log.push_back(make_presentation(0, {"half"}));
    log.push_back(make_presentation(1, {"hot"}));
    auto reports = dca::compute_mcav(log);

    dca::classify(reports, 0.5);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].antigen_type == "half");
    CHECK(*reports[0].mcav == 0.5);
    CHECK(reports[0].label == Label::Normal);
    CHECK(reports[1].antigen_type == "hot");
    CHECK(reports[1].label == Label::Anomalous);
}

TEST_CASE("classification leaves NoData rows alone and validates the threshold") {
    std::vector<Presentation> log;
    auto reports = dca::compute_mcav(log, std::vector<std::string>{"ghost"});
    dca::classify(reports, 0.5);
    CHECK(reports[0].label == Label::NoData);

    CHECK_THROWS_AS(dca::classify(reports, -0.1), dca::ConfigError);
    CHECK_THROWS_AS(dca::classify(reports, 1.1), dca::ConfigError);
}

TEST_CASE("empty log yields an empty report") {
    CHECK(dca::compute_mcav({}).empty());
}

TEST_CASE("segments cut the log at instance boundaries") {
    std::vector<Presentation> log;
    log.push_back(make_presentation(1, {"A", "A"}));
    log.push_back(make_presentation(0, {"A", "B"}));
    log.push_back(make_presentation(1, {"B"}));

    const auto segments = dca::compute_mcav_segments(log, 2);
    REQUIRE(segments.size() == 3);

    // segment 0: two mature A instances
    REQUIRE(segments[0].size() == 1);
    CHECK(segments[0][0].antigen_type == "A");
    CHECK(*segments[0][0].mcav == 1.0);

    // segment 1: one semi A, one semi B
    REQUIRE(segments[1].size() == 2);
    CHECK(*segments[1][0].mcav == 0.0);
    CHECK(*segments[1][1].mcav == 0.0);

    // segment 2 (partial): one mature B
    REQUIRE(segments[2].size() == 1);
    CHECK(segments[2][0].antigen_type == "B");
    CHECK(*segments[2][0].mcav == 1.0);
}

TEST_CASE("segment tallies agree with the whole-log tally") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 20; ++i) {
        const auto log = random_log(rng);
        const auto whole = flatten_tally(log);
        const auto segments = dca::compute_mcav_segments(log, 7);
        std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> merged;
        for (const auto& segment : segments) {
            for (const auto& report : segment) {
                auto& [mature, total] = merged[report.antigen_type];
                mature += report.mature_count;
                total += report.total;
            }
        }
        CHECK(merged == whole);
    }
}

TEST_CASE("segment size zero is rejected") {
    CHECK_THROWS_AS(dca::compute_mcav_segments({}, 0), dca::ConfigError);
}

TEST_CASE("report serialization is stable csv") {
    std::vector<Presentation> log;
    log.push_back(make_presentation(1, {"A", "A", "A"}));
    log.push_back(make_presentation(0, {"A"}));
    auto reports = dca::compute_mcav(log, std::vector<std::string>{"A", "ghost"});
    dca::classify(reports, 0.5);
    const auto text = dca::serialize_reports(reports);
    CHECK(text ==
          "antigen_type,mature_count,semi_count,total,mcav,label\n"
          "A,3,1,4,0.750000,anomalous\n"
          "ghost,0,0,0,,nodata\n");
}
