#include "qrtile/schedule.hpp"

#include <algorithm>

namespace qrtile {

void Schedule::index_tiles() {
    tile_of.assign(static_cast<std::size_t>(n >= 0 ? order.size() : 0), -1);
    tile_of.resize(order.size(), -1);
    for (int t = 0; t < static_cast<int>(tiles.size()); ++t)
        for (int id : tiles[static_cast<std::size_t>(t)].gates)
            tile_of[static_cast<std::size_t>(id)] = t;
}

std::optional<ScheduleViolation> validate_schedule(const Circuit& circuit,
                                                   const DependencyGraph& deps,
                                                   const Schedule& schedule) {
    const int m = circuit.size();
    if (static_cast<int>(schedule.order.size()) != m)
        throw InvalidSchedule("order covers " + std::to_string(schedule.order.size()) +
                              " of " + std::to_string(m) + " operators");
    std::vector<int> position(static_cast<std::size_t>(m), -1);
    for (int x = 0; x < m; ++x) {
        int id = schedule.order[static_cast<std::size_t>(x)];
        if (id < 0 || id >= m || position[static_cast<std::size_t>(id)] != -1)
            throw InvalidSchedule("order is not a permutation of operator ids");
        position[static_cast<std::size_t>(id)] = x;
    }
    // Direct edges suffice: if every edge is ordered, so is the closure.
    auto edges = deps.edges;
    std::sort(edges.begin(), edges.end());
    for (auto [i, j] : edges)
        if (position[static_cast<std::size_t>(i)] > position[static_cast<std::size_t>(j)])
            return ScheduleViolation{i, j};
    return std::nullopt;
}

bool schedule_is_narrow(const Circuit& circuit, const Schedule& schedule) {
    for (int id : schedule.order) {
        if (!is_subset(circuit.op(id).target_mask(), schedule.mapping_of(id))) return false;
    }
    return true;
}

QrCounts count_qrs(const Schedule& schedule) {
    QrCounts c;
    QubitSet prev = schedule.initial_mapping();
    for (int id : schedule.order) {
        QubitSet cur = schedule.mapping_of(id);
        if (cur != prev) ++c.total;
        prev = cur;
    }
    if (c.total != static_cast<int>(schedule.qr_events.size()))
        throw InvalidSchedule("event list disagrees with mapping sequence: " +
                              std::to_string(schedule.qr_events.size()) + " events, " +
                              std::to_string(c.total) + " mapping changes");
    for (const QrEvent& ev : schedule.qr_events)
        (ev.cls == QrClass::Intra ? c.intra : c.inter)++;
    return c;
}

double qr_cost(const QrCounts& counts, const CostWeights& weights) {
    weights.validate();
    return weights.w_intra * counts.intra + weights.w_inter * counts.inter;
}

nlohmann::json qr_event_to_json(const QrEvent& event, const Schedule& schedule) {
    nlohmann::json swaps = nlohmann::json::array();
    for (auto [a, b] : event.swaps) swaps.push_back({a, b});
    int before_gate = 0;
    if (event.before_tile < static_cast<int>(schedule.tiles.size())) {
        const auto& tile = schedule.tiles[static_cast<std::size_t>(event.before_tile)];
        if (!tile.gates.empty()) {
            int first = tile.gates.front();
            for (int x = 0; x < static_cast<int>(schedule.order.size()); ++x)
                if (schedule.order[static_cast<std::size_t>(x)] == first) {
                    before_gate = x;
                    break;
                }
        }
    }
    return nlohmann::json{{"swaps", swaps},
                          {"class", event.cls == QrClass::Intra ? "intra" : "inter"},
                          {"before_gate", before_gate}};
}

nlohmann::json schedule_to_json(const Schedule& schedule) {
    nlohmann::json tiles = nlohmann::json::array();
    for (const Tile& t : schedule.tiles)
        tiles.push_back({{"gates", t.gates}, {"local_qubits", set_to_vector(t.local_qubits)}});
    nlohmann::json events = nlohmann::json::array();
    for (const QrEvent& ev : schedule.qr_events) events.push_back(qr_event_to_json(ev, schedule));
    return nlohmann::json{{"order", schedule.order}, {"tiles", tiles}, {"qr_events", events}};
}

}  // namespace qrtile
