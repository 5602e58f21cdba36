#include "qrtile/layout.hpp"

#include <algorithm>

namespace qrtile {

namespace {

bool power_of_two(int x) { return x >= 1 && (x & (x - 1)) == 0; }

}  // namespace

void ClusterShape::validate() const {
    if (!power_of_two(p) || !power_of_two(n_node) || !power_of_two(n_gpn))
        throw ConfigError("cluster shape entries must be powers of two");
    if (p != n_node * n_gpn)
        throw ConfigError("cluster shape requires p = n_node * n_gpn");
}

void CostWeights::validate() const {
    if (w_intra < 0.0 || w_inter < 0.0) throw ConfigError("cost weights must be non-negative");
    if (w_inter < w_intra) throw ConfigError("inter weight must be at least the intra weight");
}

QubitLayout QubitLayout::identity(int n, const ClusterShape& shape) {
    shape.validate();
    if (n < 1 || n > kMaxQubits) throw ConfigError("qubit count out of range");
    QubitLayout l;
    l.n = n;
    l.n_local = n - shape.global_bits();
    l.intra_bits = shape.intra_bits();
    if (l.n_local < 1) throw TooManyPEs("p = " + std::to_string(shape.p) + " leaves no local qubit");
    l.pos_of.resize(static_cast<std::size_t>(n));
    l.qubit_at.resize(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        l.pos_of[static_cast<std::size_t>(q)] = q;
        l.qubit_at[static_cast<std::size_t>(q)] = q;
    }
    return l;
}

QubitSet QubitLayout::local_set() const {
    QubitSet s = 0;
    for (int p = 0; p < n_local; ++p) s |= qbit(qubit_at[static_cast<std::size_t>(p)]);
    return s;
}

QubitSet QubitLayout::intra_set() const {
    QubitSet s = 0;
    for (int p = n_local; p < inter_start(); ++p) s |= qbit(qubit_at[static_cast<std::size_t>(p)]);
    return s;
}

QubitSet QubitLayout::inter_set() const {
    QubitSet s = 0;
    for (int p = inter_start(); p < n; ++p) s |= qbit(qubit_at[static_cast<std::size_t>(p)]);
    return s;
}

void QubitLayout::check() const {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int q = 0; q < n; ++q) {
        int p = pos_of[static_cast<std::size_t>(q)];
        if (p < 0 || p >= n || qubit_at[static_cast<std::size_t>(p)] != q)
            throw Error("layout is not a bijection");
        if (seen[static_cast<std::size_t>(p)]++) throw Error("layout position used twice");
    }
}

Access classify_access(const Operator& op, const QubitLayout& layout) {
    for (int t : op.targets)
        if (layout.pos_of[static_cast<std::size_t>(t)] >= layout.n_local) return Access::Wide;
    return Access::Narrow;
}

QrClass classify_qr(const QrEvent& event) {
    if (event.swaps.empty()) throw DegenerateQr("empty swap set");
    bool touches_global = false;
    bool touches_inter = false;
    for (auto [a, b] : event.swaps) {
        for (int q : {a, b}) {
            Region r = event.before.region_of(event.before.pos_of[static_cast<std::size_t>(q)]);
            if (r != Region::Local) touches_global = true;
            if (r == Region::Inter) touches_inter = true;
        }
    }
    if (!touches_global) throw DegenerateQr("swaps confined to local positions");
    return touches_inter ? QrClass::Inter : QrClass::Intra;
}

std::uint64_t qr_data_volume(int k, int n) {
    if (k <= 0) return 0;
    return (std::uint64_t{1} << n) - (std::uint64_t{1} << (n - k));
}

QrEvent make_qr_event_from_pairs(const QubitLayout& before,
                                 const std::vector<std::pair<int, int>>& pairs) {
    QrEvent ev;
    ev.swaps = pairs;
    ev.before = before;
    ev.after = before;
    for (auto [d, a] : pairs) {
        int pd = ev.after.pos_of[static_cast<std::size_t>(d)];
        int pa = ev.after.pos_of[static_cast<std::size_t>(a)];
        std::swap(ev.after.pos_of[static_cast<std::size_t>(d)],
                  ev.after.pos_of[static_cast<std::size_t>(a)]);
        ev.after.qubit_at[static_cast<std::size_t>(pd)] = a;
        ev.after.qubit_at[static_cast<std::size_t>(pa)] = d;
    }
    ev.cls = classify_qr(ev);
    return ev;
}

std::optional<QrEvent> make_qr_event(const QubitLayout& before, QubitSet new_locals,
                                     std::optional<QubitSet> wanted_intra) {
    const QubitSet old_locals = before.local_set();
    if (new_locals == old_locals) return std::nullopt;
    if (set_size(new_locals) != before.n_local)
        throw Error("new local set has wrong size");

    std::vector<int> departing = set_to_vector(old_locals & ~new_locals);
    std::vector<int> arriving = set_to_vector(new_locals & ~old_locals);
    if (departing.size() != arriving.size()) throw Error("unbalanced local exchange");

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(departing.size());

    if (wanted_intra && before.intra_bits > 0 && before.inter_start() < before.n) {
        // Route departing qubits to the region the caller asked for, as far
        // as the vacated global positions allow. Globals that stay global
        // keep their positions.
        auto region_of_qubit = [&](int q) {
            return before.region_of(before.pos_of[static_cast<std::size_t>(q)]);
        };
        std::vector<int> arr_intra, arr_inter, dep_intra, dep_inter;
        for (int a : arriving)
            (region_of_qubit(a) == Region::Intra ? arr_intra : arr_inter).push_back(a);
        for (int d : departing)
            (contains(*wanted_intra, d) ? dep_intra : dep_inter).push_back(d);

        std::vector<int> dep_rest, arr_rest;
        std::size_t ni = std::min(dep_intra.size(), arr_intra.size());
        std::size_t ne = std::min(dep_inter.size(), arr_inter.size());
        for (std::size_t i = 0; i < ni; ++i) pairs.emplace_back(dep_intra[i], arr_intra[i]);
        for (std::size_t i = 0; i < ne; ++i) pairs.emplace_back(dep_inter[i], arr_inter[i]);
        for (std::size_t i = ni; i < dep_intra.size(); ++i) dep_rest.push_back(dep_intra[i]);
        for (std::size_t i = ne; i < dep_inter.size(); ++i) dep_rest.push_back(dep_inter[i]);
        for (std::size_t i = ni; i < arr_intra.size(); ++i) arr_rest.push_back(arr_intra[i]);
        for (std::size_t i = ne; i < arr_inter.size(); ++i) arr_rest.push_back(arr_inter[i]);
        std::sort(dep_rest.begin(), dep_rest.end());
        std::sort(arr_rest.begin(), arr_rest.end());
        for (std::size_t i = 0; i < dep_rest.size(); ++i)
            pairs.emplace_back(dep_rest[i], arr_rest[i]);
        std::sort(pairs.begin(), pairs.end());
    } else {
        for (std::size_t i = 0; i < departing.size(); ++i)
            pairs.emplace_back(departing[i], arriving[i]);
    }

    return make_qr_event_from_pairs(before, pairs);
}

}  // namespace qrtile
