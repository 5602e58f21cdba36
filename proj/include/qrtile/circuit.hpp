#pragma once

#include <optional>
#include <utility>

#include "qrtile/types.hpp"

namespace qrtile {

enum class OpKind { Gate, PauliString };

/*
 * A quantum operator: either a unitary gate acting on an ordered target
 * list, or a Pauli string over all n qubits. The target order of a gate
 * defines the payload bit convention: matrix index bit j corresponds to
 * targets[j].
 */
struct Operator {
    int id = 0;
    OpKind kind = OpKind::Gate;
    std::vector<int> targets;
    GatePayload payload;   // gates only; may be null for scheduling-only runs
    std::string letters;   // Pauli strings only

    QubitSet target_mask() const { return mask_of(targets); }
    int arity() const { return static_cast<int>(targets.size()); }
};

Operator make_gate(int id, std::vector<int> targets, GatePayload payload = nullptr);
Operator make_pauli_op(int id, const std::string& letters);

struct Circuit {
    int n = 0;
    std::vector<Operator> operators;

    int size() const { return static_cast<int>(operators.size()); }
    const Operator& op(int id) const { return operators[static_cast<std::size_t>(id)]; }

    // Checks ids are 0..m-1 in order, targets in range, Pauli letters
    // consistent with targets, payload dimensions and unitarity.
    void validate() const;
};

/*
 * Direct data dependencies between operators plus per-operator depths.
 * An edge (i, j) means operator j directly depends on operator i: they
 * share a target qubit, i precedes j in circuit order, and no operator
 * between them touches a shared qubit (last-writer rule). Pauli-string
 * operators commute under summation and never generate dependencies.
 */
struct DependencyGraph {
    std::vector<std::pair<int, int>> edges;
    std::vector<int> depth;
    std::vector<std::vector<int>> preds;
    std::vector<std::vector<int>> succs;

    // True iff j is reachable from i through direct edges.
    bool reaches(int i, int j) const;
};

DependencyGraph build_dependency_graph(const Circuit& circuit);

// Stable order: depth ascending, then sorted target set (lexicographic),
// then operator id.
std::vector<int> depth_sort(const Circuit& circuit, const DependencyGraph& deps);

}  // namespace qrtile
