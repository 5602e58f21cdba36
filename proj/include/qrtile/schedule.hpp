#pragma once

#include <optional>

#include "json.hpp"
#include "qrtile/layout.hpp"

namespace qrtile {

/*
 * A maximal run of operators executed under one local-qubit set. Gates in
 * a tile all have targets inside local_qubits.
 */
struct Tile {
    std::vector<int> gates;
    QubitSet local_qubits = 0;
};

/*
 * Execution order plus the per-operator qubit mapping, represented as
 * tiles, and the reordering events between them. qr_events[i].before_tile
 * names the tile the event precedes; the first tile has an entry event
 * only when its mapping differs from the initial {0..n_local-1}.
 */
struct Schedule {
    int n = 0;
    int n_local = 0;
    ClusterShape shape;
    std::vector<int> order;
    std::vector<Tile> tiles;
    std::vector<QrEvent> qr_events;
    std::vector<int> tile_of;  // operator id -> tile index

    QubitSet initial_mapping() const { return low_set(n_local); }
    QubitSet mapping_of(int op_id) const { return tiles[static_cast<std::size_t>(tile_of[static_cast<std::size_t>(op_id)])].local_qubits; }

    // Rebuilds tile_of from tiles; called by schedulers after assembly.
    void index_tiles();
};

struct ScheduleViolation {
    int before = 0;  // operator that must run first
    int after = 0;   // operator that was ordered too early
};

// C1: every dependency pair appears in order. Returns the first violating
// direct edge, or nullopt when the schedule is valid. Throws
// InvalidSchedule when order is not a permutation of the operator ids.
std::optional<ScheduleViolation> validate_schedule(const Circuit& circuit,
                                                   const DependencyGraph& deps,
                                                   const Schedule& schedule);

// C2: every operator's targets are inside its assigned mapping.
bool schedule_is_narrow(const Circuit& circuit, const Schedule& schedule);

struct QrCounts {
    int total = 0;
    int intra = 0;
    int inter = 0;
};

// Counts adjacent mapping changes over the execution order (starting from
// the initial mapping) and splits them by event class. Throws
// InvalidSchedule if the event list disagrees with the mapping sequence.
QrCounts count_qrs(const Schedule& schedule);

double qr_cost(const QrCounts& counts, const CostWeights& weights);

nlohmann::json qr_event_to_json(const QrEvent& event, const Schedule& schedule);
nlohmann::json schedule_to_json(const Schedule& schedule);

}  // namespace qrtile
