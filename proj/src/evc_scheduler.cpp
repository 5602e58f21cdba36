#include "qrtile/evc_scheduler.hpp"

#include <algorithm>
#include <set>
#include <thread>

namespace qrtile {

namespace {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // exact at every step: r is a binomial coefficient times a partial factor
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

// Combinations of k elements from [0, n) in lexicographic order of their
// ascending element lists.
struct CombinationCursor {
    int n = 0, k = 0;
    std::vector<int> c;

    CombinationCursor(int n_, int k_, std::uint64_t rank) : n(n_), k(k_), c(static_cast<std::size_t>(k_)) {
        // unrank: count combinations by leading element
        int prev = -1;
        for (int i = 0; i < k; ++i) {
            int v = prev + 1;
            while (true) {
                std::uint64_t block = binomial(n - v - 1, k - i - 1);
                if (rank < block) break;
                rank -= block;
                ++v;
            }
            c[static_cast<std::size_t>(i)] = v;
            prev = v;
        }
    }

    QubitSet mask() const { return mask_of(c); }

    bool advance() {
        int i = k - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) return false;
        ++c[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
        return true;
    }
};

QubitSet pad_lowest(QubitSet s, int n, int size) {
    QubitSet pool = low_set(n) & ~s;
    while (set_size(s) < size) {
        QubitSet low = pool & (~pool + 1);
        s |= low;
        pool &= ~low;
    }
    return s;
}

struct BestTile {
    int covered = 0;
    std::uint64_t rank = ~std::uint64_t{0};
    QubitSet mask = 0;
};

// Scans candidate ranks [begin, end); `first wins` on ties keeps the
// lexicographically smallest set.
BestTile scan_range(int n, int n_local, std::uint64_t begin, std::uint64_t end,
                    const std::vector<QubitSet>& reps, const std::vector<char>& live) {
    BestTile best;
    if (begin >= end) return best;
    CombinationCursor cur(n, n_local, begin);
    for (std::uint64_t r = begin; r < end; ++r) {
        QubitSet cand = cur.mask();
        int covered = 0;
        for (std::size_t g = 0; g < reps.size(); ++g)
            if (live[g] && is_subset(reps[g], cand)) ++covered;
        if (covered > best.covered) best = BestTile{covered, r, cand};
        if (r + 1 < end) cur.advance();
    }
    return best;
}

// Union-closure candidates: every union of live representatives that fits
// within n_local, padded. Contains a maximum cover because the union of
// any tile's covered representatives is itself such a union.
std::vector<QubitSet> closure_candidates(int n, int n_local, const std::vector<QubitSet>& reps,
                                         const std::vector<char>& live) {
    std::set<QubitSet> unions;
    std::vector<QubitSet> frontier;
    for (std::size_t g = 0; g < reps.size(); ++g) {
        if (!live[g]) continue;
        if (unions.insert(reps[g]).second) frontier.push_back(reps[g]);
    }
    while (!frontier.empty()) {
        QubitSet u = frontier.back();
        frontier.pop_back();
        for (std::size_t g = 0; g < reps.size(); ++g) {
            if (!live[g]) continue;
            QubitSet v = u | reps[g];
            if (v == u || set_size(v) > n_local) continue;
            if (unions.insert(v).second) frontier.push_back(v);
        }
    }
    std::set<QubitSet> padded;
    for (QubitSet u : unions) padded.insert(pad_lowest(u, n, n_local));
    if (padded.empty()) padded.insert(pad_lowest(0, n, n_local));
    return {padded.begin(), padded.end()};
}

}  // namespace

QubitSet effective_targets(const PauliTerm& term, bool diagonalize) {
    return diagonalize ? term.xy_targets() : term.plain_targets();
}

std::vector<PauliTermGroup> merge_terms(const std::vector<PauliTerm>& terms, bool diagonalize) {
    std::vector<int> idx(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) idx[i] = static_cast<int>(i);
    std::vector<QubitSet> eff(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) eff[i] = effective_targets(terms[i], diagonalize);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return set_size(eff[static_cast<std::size_t>(a)]) > set_size(eff[static_cast<std::size_t>(b)]);
    });

    std::vector<PauliTermGroup> groups;
    for (int i : idx) {
        QubitSet t = eff[static_cast<std::size_t>(i)];
        bool placed = false;
        for (PauliTermGroup& g : groups) {
            if (is_subset(t, g.representative)) {
                g.members.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back(PauliTermGroup{t, {i}});
    }
    for (PauliTermGroup& g : groups) std::sort(g.members.begin(), g.members.end());
    return groups;
}

PauliTilePlan tiling_pauli_strings(const std::vector<PauliTermGroup>& groups, int n,
                                   const ClusterShape& shape, bool diagonalized, int workers,
                                   bool restrict_candidates) {
    shape.validate();
    if (workers < 1) throw ConfigError("workers must be at least 1");
    const int n_local = n - shape.global_bits();
    if (n_local < 1) throw TooManyPEs("no local qubits for p = " + std::to_string(shape.p));
    for (const PauliTermGroup& g : groups)
        if (set_size(g.representative) > n_local)
            throw TermTooWide("group representative spans " +
                              std::to_string(set_size(g.representative)) + " qubits, only " +
                              std::to_string(n_local) + " local");

    PauliTilePlan plan;
    plan.n = n;
    plan.n_local = n_local;
    plan.shape = shape;
    plan.diagonalized = diagonalized;

    std::vector<QubitSet> reps(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) reps[g] = groups[g].representative;
    std::vector<char> live(groups.size(), 1);
    int remaining = static_cast<int>(groups.size());

    const std::uint64_t total = binomial(n, n_local);

    while (remaining > 0) {
        BestTile best;
        if (restrict_candidates) {
            for (QubitSet cand : closure_candidates(n, n_local, reps, live)) {
                int covered = 0;
                for (std::size_t g = 0; g < reps.size(); ++g)
                    if (live[g] && is_subset(reps[g], cand)) ++covered;
                // candidates are in ascending mask order; prefer smaller sets on ties
                if (covered > best.covered) best = BestTile{covered, 0, cand};
            }
        } else if (workers == 1 || total < 64) {
            best = scan_range(n, n_local, 0, total, reps, live);
        } else {
            int w = std::min<std::uint64_t>(workers, total);
            std::vector<BestTile> local(static_cast<std::size_t>(w));
            std::vector<std::thread> pool;
            for (int j = 0; j < w; ++j) {
                std::uint64_t lo = total * static_cast<std::uint64_t>(j) / static_cast<std::uint64_t>(w);
                std::uint64_t hi =
                    total * (static_cast<std::uint64_t>(j) + 1) / static_cast<std::uint64_t>(w);
                pool.emplace_back([&, j, lo, hi]() {
                    local[static_cast<std::size_t>(j)] = scan_range(n, n_local, lo, hi, reps, live);
                });
            }
            for (auto& t : pool) t.join();
            for (const BestTile& b : local) {
                if (b.covered > best.covered || (b.covered == best.covered && b.rank < best.rank))
                    best = b;
            }
        }
        if (best.covered == 0) throw Error("tile search found no cover");

        PauliTile tile;
        tile.local_qubits = best.mask;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            if (live[g] && is_subset(reps[g], best.mask)) {
                live[g] = 0;
                --remaining;
                tile.groups.push_back(static_cast<int>(g));
                for (int t : groups[g].members) tile.terms.push_back(t);
            }
        }
        plan.tiles.push_back(std::move(tile));
    }

    // Reordering events between consecutive tiles; the first tile's layout
    // is reached from the identity layout outside the plan.
    QubitLayout layout = QubitLayout::identity(n, shape);
    if (!plan.tiles.empty()) {
        if (auto ev = make_qr_event(layout, plan.tiles.front().local_qubits)) layout = ev->after;
        for (std::size_t t = 1; t < plan.tiles.size(); ++t) {
            auto ev = make_qr_event(layout, plan.tiles[t].local_qubits);
            if (ev) {
                ev->before_tile = static_cast<int>(t);
                layout = ev->after;
                plan.qr_events.push_back(std::move(*ev));
            }
        }
    }
    return plan;
}

PauliTilePlan plan_evc(const std::vector<PauliTerm>& terms, int n, const ClusterShape& shape,
                       bool diagonalize, int workers, bool restrict_candidates) {
    return tiling_pauli_strings(merge_terms(terms, diagonalize), n, shape, diagonalize, workers,
                                restrict_candidates);
}

BaselineResult index_order_baseline(const std::vector<PauliTerm>& terms, int n,
                                    const ClusterShape& shape) {
    shape.validate();
    QubitLayout layout = QubitLayout::identity(n, shape);
    BaselineResult res;
    res.order.resize(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) res.order[i] = static_cast<int>(i);

    QubitSet q_local = layout.local_set();
    for (const PauliTerm& term : terms) {
        QubitSet t = term.plain_targets();
        if (is_subset(t, q_local)) continue;
        // Every wide application reorders. The remap is best effort: a term
        // wider than the local set localizes as many targets as fit.
        ++res.n_qr;
        std::vector<std::pair<int, int>> pairs;
        int pos = 0;
        for (int g : set_to_vector(t & ~q_local)) {
            bool found = false;
            while (pos < layout.n_local) {
                int cand = layout.qubit_at[static_cast<std::size_t>(pos)];
                ++pos;
                if (!contains(t, cand)) {
                    pairs.emplace_back(cand, g);
                    found = true;
                    break;
                }
            }
            if (!found) break;
        }
        if (pairs.empty()) continue;
        QrEvent ev = make_qr_event_from_pairs(layout, pairs);
        layout = ev.after;
        q_local = layout.local_set();
    }
    return res;
}

nlohmann::json plan_to_json(const PauliTilePlan& plan) {
    nlohmann::json tiles = nlohmann::json::array();
    for (const PauliTile& t : plan.tiles)
        tiles.push_back({{"local_qubits", set_to_vector(t.local_qubits)}, {"terms", t.terms}});
    nlohmann::json events = nlohmann::json::array();
    for (const QrEvent& ev : plan.qr_events) {
        nlohmann::json swaps = nlohmann::json::array();
        for (auto [a, b] : ev.swaps) swaps.push_back({a, b});
        events.push_back({{"swaps", swaps},
                          {"class", ev.cls == QrClass::Intra ? "intra" : "inter"},
                          {"before_tile", ev.before_tile}});
    }
    return nlohmann::json{{"tiles", tiles}, {"qr_events", events}};
}

}  // namespace qrtile
