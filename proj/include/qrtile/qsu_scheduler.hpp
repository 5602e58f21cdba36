#pragma once

#include "qrtile/schedule.hpp"

namespace qrtile {

/*
 * Schedulers for quantum state update. All three return a schedule whose
 * order respects the dependency graph (C1) and whose per-tile mappings
 * keep every gate narrow (C2). The number of local qubits is
 * n - log2(shape.p); every gate arity must fit in it.
 */

// Lazy reordering via time-space tiling: alternates maximal tile
// construction with a greedy remap aimed at the shallowest remaining
// gates.
Schedule flat_tiling(const Circuit& circuit, const DependencyGraph& deps,
                     const ClusterShape& shape);

// Flat tiling with a two-phase remap that prefers exchanging intra-node
// qubits over inter-node ones.
Schedule hierarchical_tiling(const Circuit& circuit, const DependencyGraph& deps,
                             const ClusterShape& shape);

// Baseline: breadth-first order, remapping on demand before each wide
// gate without lookahead.
Schedule adhoc_schedule(const Circuit& circuit, const DependencyGraph& deps,
                        const ClusterShape& shape);

/*
 * Building blocks, exposed for direct testing. `remaining` is in depth
 * order; entries may be null (already scheduled) and are skipped.
 */

// Scans remaining gates in order, appending each gate whose targets are
// all available and blocking the targets of each gate that is not. Stops
// when no qubit remains available. Returns appended ids in scan order.
std::vector<int> tile_construction(QubitSet q_local, const Circuit& circuit,
                                   const std::vector<int>& remaining);

// Greedily grows the next local set from the targets of remaining gates
// (shallowest first) within budget n_local, then pads with the lowest
// qubits of `universe`. Returns 0 (empty set) when gates remain but
// nothing was selectable, which signals the hierarchical first phase to
// fall through.
QubitSet qubit_mapping(QubitSet universe, const Circuit& circuit,
                       const std::vector<int>& remaining, int n_local);

// Two-phase remap: first tries to select locals from the current
// local+intra set (intra reordering); otherwise selects from all qubits
// and derives the new intra set from a wider greedy pass (inter
// reordering). Returns (new locals, wanted intra set).
std::pair<QubitSet, QubitSet> hierarchical_qubit_mapping(QubitSet universe,
                                                         const Circuit& circuit,
                                                         const std::vector<int>& remaining,
                                                         QubitSet q_local, QubitSet q_intra);

}  // namespace qrtile
