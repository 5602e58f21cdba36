#include "qrtile/circuit.hpp"

#include <algorithm>
#include <set>

namespace qrtile {

Operator make_gate(int id, std::vector<int> targets, GatePayload payload) {
    Operator op;
    op.id = id;
    op.kind = OpKind::Gate;
    op.targets = std::move(targets);
    op.payload = std::move(payload);
    return op;
}

Operator make_pauli_op(int id, const std::string& letters) {
    validate_letters(letters);
    Operator op;
    op.id = id;
    op.kind = OpKind::PauliString;
    op.letters = letters;
    for (int q = 0; q < static_cast<int>(letters.size()); ++q)
        if (letters[static_cast<std::size_t>(q)] != 'I') op.targets.push_back(q);
    return op;
}

void Circuit::validate() const {
    for (int i = 0; i < size(); ++i) {
        const Operator& o = operators[static_cast<std::size_t>(i)];
        if (o.id != i) throw Error("operator ids must be dense and in order");
        if (o.kind == OpKind::Gate) {
            if (o.targets.empty()) throw Error("gate with empty target set");
            std::set<int> uniq(o.targets.begin(), o.targets.end());
            if (static_cast<int>(uniq.size()) != o.arity())
                throw Error("duplicate target qubit in gate " + std::to_string(i));
            if (o.payload) {
                if (o.payload->dim != (1 << o.arity()))
                    throw Error("payload dimension mismatch in gate " + std::to_string(i));
                if (!o.payload->is_unitary())
                    throw Error("payload not unitary in gate " + std::to_string(i));
            }
        } else {
            if (static_cast<int>(o.letters.size()) != n)
                throw Error("Pauli letters length mismatch in operator " + std::to_string(i));
            validate_letters(o.letters);
            std::vector<int> expect;
            for (int q = 0; q < n; ++q)
                if (o.letters[static_cast<std::size_t>(q)] != 'I') expect.push_back(q);
            if (expect != o.targets)
                throw Error("Pauli targets inconsistent with letters in operator " +
                            std::to_string(i));
        }
        for (int t : o.targets)
            if (t < 0 || t >= n)
                throw IndexError("target qubit " + std::to_string(t) + " out of range in operator " +
                                 std::to_string(i));
    }
}

DependencyGraph build_dependency_graph(const Circuit& circuit) {
    const int m = circuit.size();
    DependencyGraph g;
    g.depth.assign(static_cast<std::size_t>(m), 0);
    g.preds.assign(static_cast<std::size_t>(m), {});
    g.succs.assign(static_cast<std::size_t>(m), {});

    // last operator that touched each qubit
    std::vector<int> last_writer(static_cast<std::size_t>(circuit.n), -1);
    for (int j = 0; j < m; ++j) {
        const Operator& o = circuit.op(j);
        if (o.kind == OpKind::PauliString) continue;  // summation terms commute
        std::set<int> direct;
        for (int q : o.targets) {
            int w = last_writer[static_cast<std::size_t>(q)];
            if (w >= 0) direct.insert(w);
        }
        for (int i : direct) {
            g.edges.emplace_back(i, j);
            g.preds[static_cast<std::size_t>(j)].push_back(i);
            g.succs[static_cast<std::size_t>(i)].push_back(j);
            g.depth[static_cast<std::size_t>(j)] =
                std::max(g.depth[static_cast<std::size_t>(j)], g.depth[static_cast<std::size_t>(i)] + 1);
        }
        for (int q : o.targets) last_writer[static_cast<std::size_t>(q)] = j;
    }
    return g;
}

bool DependencyGraph::reaches(int i, int j) const {
    if (i == j) return false;
    std::vector<int> stack{i};
    std::vector<char> seen(succs.size(), 0);
    seen[static_cast<std::size_t>(i)] = 1;
    while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        for (int nxt : succs[static_cast<std::size_t>(cur)]) {
            if (nxt == j) return true;
            if (!seen[static_cast<std::size_t>(nxt)]) {
                seen[static_cast<std::size_t>(nxt)] = 1;
                stack.push_back(nxt);
            }
        }
    }
    return false;
}

std::vector<int> depth_sort(const Circuit& circuit, const DependencyGraph& deps) {
    std::vector<int> ids(static_cast<std::size_t>(circuit.size()));
    for (int i = 0; i < circuit.size(); ++i) ids[static_cast<std::size_t>(i)] = i;

    std::vector<std::vector<int>> sorted_targets(ids.size());
    for (int i : ids) {
        sorted_targets[static_cast<std::size_t>(i)] = circuit.op(i).targets;
        std::sort(sorted_targets[static_cast<std::size_t>(i)].begin(),
                  sorted_targets[static_cast<std::size_t>(i)].end());
    }

    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
        int da = deps.depth[static_cast<std::size_t>(a)];
        int db = deps.depth[static_cast<std::size_t>(b)];
        if (da != db) return da < db;
        const auto& ta = sorted_targets[static_cast<std::size_t>(a)];
        const auto& tb = sorted_targets[static_cast<std::size_t>(b)];
        if (ta != tb) return std::lexicographical_compare(ta.begin(), ta.end(), tb.begin(), tb.end());
        return a < b;
    });
    return ids;
}

}  // namespace qrtile
