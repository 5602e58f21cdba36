#include "qrtile/qsu_scheduler.hpp"

#include <algorithm>

namespace qrtile {

namespace {

/*
 * Depth-sorted worklist with O(1) removal. Entries are indices into the
 * sorted id sequence, linked so scans skip scheduled gates without
 * compaction.
 */
struct Worklist {
    std::vector<int> ids;      // depth-sorted operator ids
    std::vector<QubitSet> mask;  // target mask per slot
    std::vector<int> next;
    int head = 0;  // ids.size() when empty
    int live = 0;

    explicit Worklist(const Circuit& c, const std::vector<int>& sorted_ids)
        : ids(sorted_ids), mask(sorted_ids.size()), next(sorted_ids.size() + 1) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            mask[i] = c.op(ids[i]).target_mask();
            next[i] = static_cast<int>(i) + 1;
        }
        head = 0;
        live = static_cast<int>(ids.size());
    }

    bool empty() const { return live == 0; }
};

// Process P1: scan in depth order, append gates whose targets are all
// available, block the targets of gates that are not. Appended gates are
// unlinked from the worklist.
std::vector<int> wl_tile_construction(Worklist& wl, QubitSet q_local) {
    QubitSet avail = q_local;
    std::vector<int> tile;
    int prev = -1;
    int cur = wl.head;
    const int end = static_cast<int>(wl.ids.size());
    while (cur != end) {
        int nxt = wl.next[static_cast<std::size_t>(cur)];
        if (is_subset(wl.mask[static_cast<std::size_t>(cur)], avail)) {
            tile.push_back(wl.ids[static_cast<std::size_t>(cur)]);
            if (prev < 0)
                wl.head = nxt;
            else
                wl.next[static_cast<std::size_t>(prev)] = nxt;
            --wl.live;
        } else {
            avail &= ~wl.mask[static_cast<std::size_t>(cur)];
            prev = cur;
            if (avail == 0) break;
        }
        cur = nxt;
    }
    return tile;
}

// Process P2: greedy selection of the next local set, preferring the
// targets of shallow remaining gates, padded with the lowest qubits of
// the universe. Returns 0 when gates remain but nothing was selectable.
QubitSet wl_qubit_mapping(const Worklist& wl, QubitSet universe, int n_local) {
    QubitSet avail = universe;
    QubitSet sel = 0;
    const int end = static_cast<int>(wl.ids.size());
    for (int cur = wl.head; cur != end; cur = wl.next[static_cast<std::size_t>(cur)]) {
        QubitSet t = wl.mask[static_cast<std::size_t>(cur)];
        if (is_subset(t, avail) && set_size(sel | t) <= n_local) {
            sel |= t;
        } else {
            avail &= ~t;
            if (avail == 0) break;
        }
    }
    if (sel == 0 && !wl.empty()) return 0;
    QubitSet pool = universe & ~sel;
    while (set_size(sel) < n_local) {
        if (pool == 0) throw Error("universe too small to pad local set");
        QubitSet low = pool & (~pool + 1);
        sel |= low;
        pool &= ~low;
    }
    return sel;
}

void check_arities(const Circuit& circuit, int n_local) {
    for (const Operator& op : circuit.operators)
        if (op.arity() > n_local)
            throw GateTooWide("operator " + std::to_string(op.id) + " targets " +
                              std::to_string(op.arity()) + " qubits, only " +
                              std::to_string(n_local) + " local");
}

Schedule tiling_loop(const Circuit& circuit, const DependencyGraph& deps,
                     const ClusterShape& shape, bool hierarchical) {
    shape.validate();
    circuit.validate();
    QubitLayout layout = QubitLayout::identity(circuit.n, shape);
    const int n_local = layout.n_local;
    check_arities(circuit, n_local);

    Schedule s;
    s.n = circuit.n;
    s.n_local = n_local;
    s.shape = shape;

    Worklist wl(circuit, depth_sort(circuit, deps));
    QubitSet q_local = low_set(n_local);
    QubitSet q_intra = layout.intra_set();
    bool first = true;

    while (!wl.empty()) {
        std::vector<int> tile = wl_tile_construction(wl, q_local);
        if (tile.empty()) {
            // Only the initial mapping may fail to admit a gate; after a
            // remap the shallowest remaining gate is always selectable.
            if (!first) throw SchedulerStuck("tile construction made no progress");
        } else {
            for (int id : tile) s.order.push_back(id);
            s.tiles.push_back(Tile{std::move(tile), q_local});
        }
        first = false;
        if (wl.empty()) break;

        QubitSet next_local = 0;
        std::optional<QubitSet> wanted_intra;
        if (hierarchical) {
            QubitSet phase1 = wl_qubit_mapping(wl, q_local | q_intra, n_local);
            if (phase1 != 0 && phase1 != q_local) {
                next_local = phase1;
                wanted_intra = (q_local | q_intra) & ~phase1;
            } else {
                next_local = wl_qubit_mapping(wl, low_set(circuit.n), n_local);
                QubitSet wide =
                    wl_qubit_mapping(wl, low_set(circuit.n), n_local + set_size(q_intra));
                wanted_intra = wide & ~next_local;
            }
        } else {
            next_local = wl_qubit_mapping(wl, low_set(circuit.n), n_local);
        }
        if (next_local == 0 || next_local == q_local)
            throw SchedulerStuck("qubit mapping made no progress");

        auto ev = make_qr_event(layout, next_local, wanted_intra);
        if (!ev) throw SchedulerStuck("degenerate remap");
        ev->before_tile = static_cast<int>(s.tiles.size());
        layout = ev->after;
        s.qr_events.push_back(std::move(*ev));
        q_local = next_local;
        q_intra = layout.intra_set();
    }
    s.index_tiles();
    return s;
}

}  // namespace

std::vector<int> tile_construction(QubitSet q_local, const Circuit& circuit,
                                   const std::vector<int>& remaining) {
    Worklist wl(circuit, remaining);
    return wl_tile_construction(wl, q_local);
}

QubitSet qubit_mapping(QubitSet universe, const Circuit& circuit,
                       const std::vector<int>& remaining, int n_local) {
    Worklist wl(circuit, remaining);
    return wl_qubit_mapping(wl, universe, n_local);
}

std::pair<QubitSet, QubitSet> hierarchical_qubit_mapping(QubitSet universe,
                                                         const Circuit& circuit,
                                                         const std::vector<int>& remaining,
                                                         QubitSet q_local, QubitSet q_intra) {
    Worklist wl(circuit, remaining);
    const int n_local = set_size(q_local);
    QubitSet phase1 = wl_qubit_mapping(wl, q_local | q_intra, n_local);
    if (phase1 != 0) return {phase1, (q_local | q_intra) & ~phase1};
    QubitSet next_local = wl_qubit_mapping(wl, universe, n_local);
    QubitSet wide = wl_qubit_mapping(wl, universe, n_local + set_size(q_intra));
    return {next_local, wide & ~next_local};
}

Schedule flat_tiling(const Circuit& circuit, const DependencyGraph& deps,
                     const ClusterShape& shape) {
    return tiling_loop(circuit, deps, shape, false);
}

Schedule hierarchical_tiling(const Circuit& circuit, const DependencyGraph& deps,
                             const ClusterShape& shape) {
    return tiling_loop(circuit, deps, shape, true);
}

Schedule adhoc_schedule(const Circuit& circuit, const DependencyGraph& deps,
                        const ClusterShape& shape) {
    shape.validate();
    circuit.validate();
    QubitLayout layout = QubitLayout::identity(circuit.n, shape);
    const int n_local = layout.n_local;
    check_arities(circuit, n_local);

    Schedule s;
    s.n = circuit.n;
    s.n_local = n_local;
    s.shape = shape;

    std::vector<int> current;
    QubitSet q_local = low_set(n_local);

    auto close_tile = [&]() {
        if (!current.empty()) {
            s.tiles.push_back(Tile{std::move(current), q_local});
            current.clear();
        }
    };

    for (int id : depth_sort(circuit, deps)) {
        QubitSet t = circuit.op(id).target_mask();
        if (!is_subset(t, q_local)) {
            close_tile();
            // Swap each global target with the lowest-position local qubit
            // the gate does not touch.
            std::vector<std::pair<int, int>> pairs;
            int pos = 0;
            for (int g : set_to_vector(t & ~q_local)) {
                while (true) {
                    int cand = layout.qubit_at[static_cast<std::size_t>(pos)];
                    ++pos;
                    if (!contains(t, cand)) {
                        pairs.emplace_back(cand, g);
                        break;
                    }
                }
            }
            QrEvent ev = make_qr_event_from_pairs(layout, pairs);
            ev.before_tile = static_cast<int>(s.tiles.size());
            layout = ev.after;
            q_local = layout.local_set();
            s.qr_events.push_back(std::move(ev));
        }
        current.push_back(id);
        s.order.push_back(id);
    }
    close_tile();
    s.index_tiles();
    return s;
}

}  // namespace qrtile
