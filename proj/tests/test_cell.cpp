#include <doctest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "dca/cell.hpp"
#include "dca/signals.hpp"

using dca::CellState;
using dca::DendriticCell;
using dca::SignalSnapshot;
using dca::WeightMatrix;

namespace {

SignalSnapshot pamp_snapshot(double value) {
    SignalSnapshot s;
    s.pamp = {value};
    return s;
}

SignalSnapshot safe_snapshot(double value) {
    SignalSnapshot s;
    s.safe = {value};
    return s;
}

} // namespace

TEST_CASE("update accumulates interim outputs and collects antigen") {
    auto cell = dca::make_cell(0, 100.0);
    cell.cumulative = {1.0, 1.0, 1.0};
    const WeightMatrix w;
    const std::vector<std::string> antigen = {"A"};

    const auto dropped = dca::update_cell(cell, pamp_snapshot(1.0), antigen, w);
    CHECK(dropped == 0);
    CHECK(cell.cumulative.csm == 3.0);
    CHECK(cell.cumulative.semi == 1.0);
    CHECK(cell.cumulative.mat == 3.0);
    REQUIRE(cell.antigen_store.size() == 1);
    CHECK(cell.antigen_store.front() == "A");
}

TEST_CASE("empty update leaves the cell unchanged") {
    auto cell = dca::make_cell(3, 5.0);
    dca::update_cell(cell, SignalSnapshot{}, {}, WeightMatrix{});
    CHECK(cell.cumulative.csm == 0.0);
    CHECK(cell.antigen_store.empty());
    CHECK(cell.state == CellState::Immature);
}

TEST_CASE("two identical updates double the cumulative output") {
    auto cell = dca::make_cell(0, 100.0);
    const WeightMatrix w;
    const auto snapshot = pamp_snapshot(3.0);
    dca::update_cell(cell, snapshot, {}, w);
    const auto once = cell.cumulative;
    dca::update_cell(cell, snapshot, {}, w);
    CHECK(cell.cumulative.csm == 2.0 * once.csm);
    CHECK(cell.cumulative.semi == 2.0 * once.semi);
    CHECK(cell.cumulative.mat == 2.0 * once.mat);
}

TEST_CASE("store capacity drops the oldest antigen first") {
    auto cell = dca::make_cell(0, 100.0, 2);
    const WeightMatrix w;
    const SignalSnapshot zero;
    std::size_t dropped = dca::update_cell(cell, zero, std::vector<std::string>{"A", "B"}, w);
    CHECK(dropped == 0);
    dropped = dca::update_cell(cell, zero, std::vector<std::string>{"C"}, w);
    CHECK(dropped == 1);
    REQUIRE(cell.antigen_store.size() == 2);
    CHECK(cell.antigen_store[0] == "B");
    CHECK(cell.antigen_store[1] == "C");
}

TEST_CASE("migration requires csm strictly above the threshold") {
    auto cell = dca::make_cell(0, 4.0);
    cell.cumulative.csm = 4.0;
    CHECK_FALSE(dca::check_migration(cell));
    cell.cumulative.csm = 4.0000001;
    CHECK(dca::check_migration(cell));
    cell.cumulative.csm = 0.0;
    CHECK_FALSE(dca::check_migration(cell));
}

TEST_CASE("presentation context follows the semi versus mature comparison") {
    const WeightMatrix w;

    auto mature = dca::make_cell(7, 1.0);
    dca::update_cell(mature, pamp_snapshot(1.0), std::vector<std::string>{"X"}, w);
    REQUIRE(dca::check_migration(mature));
    auto p = dca::present(mature, 42);
    CHECK(p.context == 1);
    CHECK(p.cell_id == 7);
    CHECK(p.migration_time == 42);
    REQUIRE(p.antigen.size() == 1);
    CHECK(p.antigen[0] == "X");
    CHECK(mature.state == CellState::Mature);

    auto semi = dca::make_cell(8, 1.0);
    dca::update_cell(semi, safe_snapshot(1.0), {}, w);
    REQUIRE(dca::check_migration(semi));
    p = dca::present(semi, 0);
    CHECK(p.context == 0);
    CHECK(semi.state == CellState::SemiMature);
}

TEST_CASE("a tied comparison presents in the normal context") {
    auto cell = dca::make_cell(0, 1.0);
    cell.cumulative = {2.0, 3.0, 3.0};
    const auto p = dca::present(cell, 0);
    CHECK(p.context == 0);
    CHECK(cell.state == CellState::SemiMature);
}

TEST_CASE("presentation carries the exact multiset of collected antigen") {
    auto cell = dca::make_cell(0, 0.5);
    const WeightMatrix w;
    dca::update_cell(cell, pamp_snapshot(1.0), std::vector<std::string>{"A", "B", "A"}, w);
    dca::update_cell(cell, pamp_snapshot(1.0), std::vector<std::string>{"C"}, w);
    const auto p = dca::present(cell, 1);
    const std::vector<std::string> want = {"A", "B", "A", "C"};
    CHECK(std::vector<std::string>(p.antigen.begin(), p.antigen.end()) == want);
}

TEST_CASE("reset clears outputs and antigen but keeps identity") {
    auto cell = dca::make_cell(5, 7.3);
    const WeightMatrix w;
    dca::update_cell(cell, pamp_snapshot(10.0), std::vector<std::string>{"A"}, w);
    dca::present(cell, 0);
    dca::reset_cell(cell);
    CHECK(cell.cumulative.csm == 0.0);
    CHECK(cell.cumulative.semi == 0.0);
    CHECK(cell.cumulative.mat == 0.0);
    CHECK(cell.antigen_store.empty());
    CHECK(cell.state == CellState::Immature);
    CHECK(cell.id == 5);
    CHECK(cell.migration_threshold == 7.3);

    dca::reset_cell(cell);
    CHECK(cell.state == CellState::Immature);
    CHECK(cell.migration_threshold == 7.3);
}

TEST_CASE("lifecycle misuse is a contract violation") {
    const WeightMatrix w;

    auto presented = dca::make_cell(0, 0.5);
    dca::update_cell(presented, pamp_snapshot(1.0), {}, w);
    dca::present(presented, 0);
    CHECK_THROWS_AS(dca::update_cell(presented, pamp_snapshot(1.0), {}, w), std::logic_error);
    CHECK_THROWS_AS(dca::present(presented, 1), std::logic_error);

    auto fresh = dca::make_cell(0, 10.0);
    CHECK_THROWS_AS(dca::present(fresh, 0), std::logic_error);
}

TEST_CASE("cells reject non-positive migration thresholds") {
    CHECK_THROWS_AS(dca::make_cell(0, 0.0), std::logic_error);
    CHECK_THROWS_AS(dca::make_cell(0, -1.0), std::logic_error);
}
