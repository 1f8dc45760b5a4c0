#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "dca/signals.hpp"

namespace dca {

enum class CellState { Immature, SemiMature, Mature };

/// Antigen handed over for analysis when a cell migrates. context 1 means
/// the antigen were collected under a predominantly mature (anomalous)
/// signal context, 0 under a semi-mature (normal) one.
struct Presentation {
    int cell_id = 0;
    int context = 0;  // 0 = semi-mature, 1 = mature
    std::vector<std::string> antigen;  // collection order preserved
    long migration_time = 0;  // time-step index of the migration
};

/// One agent of the population. Cells are exclusively owned by the
/// population; a cell is never touched by two concurrent updates.
///
/// The migration threshold is fixed at creation and survives resets.
/// state only ever moves Immature -> SemiMature or Immature -> Mature;
/// reset_cell returns a presented cell to Immature.
struct DendriticCell {
    int id = 0;
    double migration_threshold = 1.0;
    CellState state = CellState::Immature;
    OutputTriple cumulative;
    std::deque<std::string> antigen_store;
    std::size_t store_capacity = 0;  // 0 = unbounded; oldest dropped when full
};

DendriticCell make_cell(int id, double migration_threshold, std::size_t store_capacity = 0);

/// One immature-cell update: append the antigen batch to the store and add
/// the snapshot's interim output triple to the cumulative values.
/// Returns the number of antigen dropped by the store capacity cap
/// (always 0 when the cap is off). Caller guarantees the cell is Immature.
std::size_t update_cell(DendriticCell& cell, const SignalSnapshot& snapshot,
                        std::span<const std::string> antigen, const WeightMatrix& weights);

/// True iff the cumulative costimulation value strictly exceeds the cell's
/// migration threshold. At equality the cell keeps sampling.
bool check_migration(const DendriticCell& cell);

/// Migrate the cell: decide the terminal context (mature iff the cumulative
/// mature output strictly exceeds the semi-mature one; ties go semi-mature)
/// and hand over the entire antigen store. Requires check_migration(cell).
Presentation present(DendriticCell& cell, long now);

/// Zero the cumulative outputs, expunge the antigen store and return the
/// cell to the immature sampling state. Threshold and id are untouched.
/// Idempotent.
void reset_cell(DendriticCell& cell);

} // namespace dca
