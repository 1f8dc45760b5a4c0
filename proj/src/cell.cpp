#include "dca/cell.hpp"

#include "dca/errors.hpp"

namespace dca {

DendriticCell make_cell(int id, double migration_threshold, std::size_t store_capacity) {
    detail::contract(migration_threshold > 0.0, "migration threshold must be positive");
    DendriticCell cell;
    cell.id = id;
    cell.migration_threshold = migration_threshold;
    cell.store_capacity = store_capacity;
    return cell;
}

std::size_t update_cell(DendriticCell& cell, const SignalSnapshot& snapshot,
                        std::span<const std::string> antigen, const WeightMatrix& weights) {
    detail::contract(cell.state == CellState::Immature, "update_cell on a non-immature cell");

    std::size_t dropped = 0;
    for (const auto& item : antigen) {
        cell.antigen_store.push_back(item);
        if (cell.store_capacity > 0 && cell.antigen_store.size() > cell.store_capacity) {
            cell.antigen_store.pop_front();
            ++dropped;
        }
    }
    cell.cumulative += process_signals(snapshot, weights);
    return dropped;
}

bool check_migration(const DendriticCell& cell) {
    return cell.cumulative.csm > cell.migration_threshold;
}

Presentation present(DendriticCell& cell, long now) {
    detail::contract(cell.state == CellState::Immature, "present on a non-immature cell");
    detail::contract(check_migration(cell), "present before the migration threshold is exceeded");

    const bool mature = cell.cumulative.mat > cell.cumulative.semi;
    cell.state = mature ? CellState::Mature : CellState::SemiMature;

    Presentation p;
    p.cell_id = cell.id;
    p.context = mature ? 1 : 0;
    p.antigen.assign(cell.antigen_store.begin(), cell.antigen_store.end());
    p.migration_time = now;
    return p;
}

void reset_cell(DendriticCell& cell) {
    cell.cumulative = OutputTriple{};
    cell.antigen_store.clear();
    cell.state = CellState::Immature;
}

} // namespace dca
