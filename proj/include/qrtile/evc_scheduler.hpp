#pragma once

#include "json.hpp"
#include "qrtile/layout.hpp"

namespace qrtile {

/*
 * Pauli-string tiling for expectation value computation. Terms are first
 * merged into groups with a common representative target set, then the
 * groups are covered greedily by local-qubit sets, largest cover first.
 */

struct PauliTermGroup {
    QubitSet representative = 0;
    std::vector<int> members;  // term indices
};

struct PauliTile {
    QubitSet local_qubits = 0;
    std::vector<int> groups;
    std::vector<int> terms;  // flattened member lists, in group order
};

struct PauliTilePlan {
    int n = 0;
    int n_local = 0;
    ClusterShape shape;
    bool diagonalized = false;
    std::vector<PauliTile> tiles;
    std::vector<QrEvent> qr_events;  // between consecutive tiles: t tiles, t-1 events

    int qr_count() const { return static_cast<int>(qr_events.size()); }
};

// Targets a term must have local: all non-identity letters, or only X/Y
// letters when diagonalization handles Z on global qubits.
QubitSet effective_targets(const PauliTerm& term, bool diagonalize);

// Descending-size greedy grouping: a term joins the first group whose
// representative contains its effective targets, else founds a group.
std::vector<PauliTermGroup> merge_terms(const std::vector<PauliTerm>& terms,
                                        bool diagonalize);

/*
 * Greedy cover: repeatedly enumerate all C(n, n_local) candidate local
 * sets in lexicographic order, take the one covering the most remaining
 * groups (first maximum wins, so ties go to the lexicographically
 * smallest set), and emit it as a tile. `workers` splits the candidate
 * enumeration into contiguous ranges searched concurrently; the result is
 * identical for every worker count. When `restrict_candidates` is set,
 * only unions of representatives padded to n_local are scanned.
 */
PauliTilePlan tiling_pauli_strings(const std::vector<PauliTermGroup>& groups, int n,
                                   const ClusterShape& shape, bool diagonalized,
                                   int workers = 1, bool restrict_candidates = false);

// merge_terms + tiling_pauli_strings.
PauliTilePlan plan_evc(const std::vector<PauliTerm>& terms, int n,
                       const ClusterShape& shape, bool diagonalize, int workers = 1,
                       bool restrict_candidates = false);

/*
 * Index-order baseline: terms in input order, an on-demand remap before
 * every term whose plain targets are not currently local. A term wider
 * than n_local still costs one remap (best effort); the result is used
 * for QR counting only.
 */
struct BaselineResult {
    std::vector<int> order;
    int n_qr = 0;
};

BaselineResult index_order_baseline(const std::vector<PauliTerm>& terms, int n,
                                    const ClusterShape& shape);

nlohmann::json plan_to_json(const PauliTilePlan& plan);

}  // namespace qrtile
