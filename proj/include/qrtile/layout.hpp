#pragma once

#include <optional>
#include <utility>

#include "qrtile/circuit.hpp"
#include "qrtile/types.hpp"

namespace qrtile {

/*
 * Emulated cluster geometry: p processing elements arranged as n_node
 * nodes with n_gpn PEs each. All three are powers of two.
 */
struct ClusterShape {
    int p = 1;
    int n_node = 1;
    int n_gpn = 1;

    static ClusterShape flat(int p) { return ClusterShape{p, 1, p}; }
    static ClusterShape two_level(int n_node, int n_gpn) {
        return ClusterShape{n_node * n_gpn, n_node, n_gpn};
    }

    int global_bits() const { return std::countr_zero(static_cast<unsigned>(p)); }
    int intra_bits() const { return std::countr_zero(static_cast<unsigned>(n_gpn)); }
    int inter_bits() const { return std::countr_zero(static_cast<unsigned>(n_node)); }

    void validate() const;
    bool operator==(const ClusterShape&) const = default;
};

enum class Region { Local, Intra, Inter };

/*
 * Bijection between qubits and bit positions of the distributed index.
 * Positions [0, n_local) address amplitudes within a PE, the next
 * intra_bits positions select the PE within a node, and the remaining
 * positions select the node.
 */
struct QubitLayout {
    int n = 0;
    int n_local = 0;
    int intra_bits = 0;
    std::vector<int> pos_of;    // qubit -> position
    std::vector<int> qubit_at;  // position -> qubit

    static QubitLayout identity(int n, const ClusterShape& shape);

    int inter_start() const { return n_local + intra_bits; }
    Region region_of(int position) const {
        if (position < n_local) return Region::Local;
        if (position < inter_start()) return Region::Intra;
        return Region::Inter;
    }

    QubitSet local_set() const;
    QubitSet intra_set() const;
    QubitSet inter_set() const;

    void check() const;
    bool operator==(const QubitLayout&) const = default;
};

enum class Access { Narrow, Wide };

// Narrow iff every target sits at a local position.
Access classify_access(const Operator& op, const QubitLayout& layout);

enum class QrClass { Intra, Inter };

/*
 * One qubit reordering: a set of disjoint qubit transpositions, each
 * exchanging a departing local qubit with an arriving global one. The
 * arriving qubit takes the local position of its partner and vice versa;
 * unmoved qubits keep their positions.
 */
struct QrEvent {
    std::vector<std::pair<int, int>> swaps;  // (departing local, arriving global)
    QubitLayout before;
    QubitLayout after;
    QrClass cls = QrClass::Intra;
    int before_tile = 0;  // index of the tile this event precedes
};

// Recomputes the class from swaps and the before layout. Throws
// DegenerateQr for an empty swap set or swaps confined to local positions.
QrClass classify_qr(const QrEvent& event);

// Assembles an event from explicit disjoint qubit transpositions, deriving
// the after layout and the class.
QrEvent make_qr_event_from_pairs(const QubitLayout& before,
                                 const std::vector<std::pair<int, int>>& pairs);

// Amplitudes that change owner when k local/global pairs are exchanged.
std::uint64_t qr_data_volume(int k, int n);

/*
 * Builds the event that moves `before` to a layout whose local set is
 * `new_locals`. Returns nullopt when the local set is unchanged (a
 * permutation inside the local region implies no communication and is
 * normalized away). `wanted_intra` steers which arriving globals land in
 * the intra region; qubits that stay global never move, so a wanted set
 * that would relocate one is satisfied only as far as the vacated
 * positions allow.
 */
std::optional<QrEvent> make_qr_event(const QubitLayout& before, QubitSet new_locals,
                                     std::optional<QubitSet> wanted_intra = std::nullopt);

struct CostWeights {
    double w_intra = 1.0;
    double w_inter = 24.0;

    void validate() const;
};

}  // namespace qrtile
