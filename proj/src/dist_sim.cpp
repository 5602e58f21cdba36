#include "qrtile/dist_sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <thread>

namespace qrtile {

namespace {

// i^k for k in 0..3
Amp ipow(int k) {
    switch (k & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

void for_each_pe(int p, int workers, const std::function<void(int)>& body) {
    workers = std::min(workers, p);
    if (workers <= 1) {
        for (int j = 0; j < p; ++j) body(j);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        int lo = p * w / workers;
        int hi = p * (w + 1) / workers;
        pool.emplace_back([&, lo, hi]() {
            for (int j = lo; j < hi; ++j) body(j);
        });
    }
    for (auto& t : pool) t.join();
}

// Spreads the bits of `value` over the positions NOT in sorted_positions.
std::uint64_t insert_zero_bits(std::uint64_t value, const std::vector<int>& sorted_positions) {
    for (int p : sorted_positions) {
        std::uint64_t low = value & (qbit(p) - 1);
        value = ((value >> p) << (p + 1)) | low;
    }
    return value;
}

// Masks a term's letters against a layout. Local letters become bit masks
// over positions [0, n_local); global Z letters become a parity mask over
// PE index bits. Global X/Y letters are rejected.
struct MaskedTerm {
    std::uint64_t x = 0, y = 0, z = 0;  // local positions
    std::uint64_t global_z = 0;         // PE index bits
    int y_count = 0;
};

MaskedTerm mask_term(const PauliTerm& term, const QubitLayout& layout) {
    MaskedTerm m;
    for (int q = 0; q < term.n(); ++q) {
        char c = term.letters[static_cast<std::size_t>(q)];
        if (c == 'I') continue;
        int pos = layout.pos_of[static_cast<std::size_t>(q)];
        if (pos < layout.n_local) {
            if (c == 'X') m.x |= qbit(pos);
            if (c == 'Y') {
                m.y |= qbit(pos);
                ++m.y_count;
            }
            if (c == 'Z') m.z |= qbit(pos);
        } else {
            if (c != 'Z')
                throw NotDiagonalizable(std::string("letter ") + c + " on global qubit " +
                                        std::to_string(q));
            m.global_z |= qbit(pos - layout.n_local);
        }
    }
    return m;
}

// <psi_j|P_L|psi_j> for the local part of a masked term.
Amp local_pauli_expectation(const std::vector<Amp>& v, const MaskedTerm& m) {
    const std::uint64_t xy = m.x | m.y;
    const std::uint64_t sign_mask = m.z | m.y;
    Amp acc = 0.0;
    for (std::uint64_t i = 0; i < v.size(); ++i) {
        double sgn = (std::popcount(i & sign_mask) & 1) ? -1.0 : 1.0;
        acc += sgn * std::conj(v[i ^ xy]) * v[i];
    }
    return ipow(m.y_count) * acc;
}

double pe_sign(int pe, std::uint64_t global_z) {
    return (std::popcount(static_cast<std::uint64_t>(pe) & global_z) & 1) ? -1.0 : 1.0;
}

}  // namespace

ReferenceState ReferenceState::zero(int n) {
    ReferenceState r;
    r.n = n;
    r.amps.assign(std::uint64_t{1} << n, Amp{0.0, 0.0});
    r.amps[0] = 1.0;
    return r;
}

double ReferenceState::norm() const {
    double s = 0.0;
    for (const Amp& a : amps) s += std::norm(a);
    return std::sqrt(s);
}

double DistributedState::norm() const {
    double s = 0.0;
    for (const auto& v : sub)
        for (const Amp& a : v) s += std::norm(a);
    return std::sqrt(s);
}

DistributedState init_state(int n, const ClusterShape& shape) {
    DistributedState st;
    st.n = n;
    st.shape = shape;
    st.layout = QubitLayout::identity(n, shape);
    st.sub.assign(static_cast<std::size_t>(shape.p),
                  std::vector<Amp>(std::uint64_t{1} << st.layout.n_local, Amp{0.0, 0.0}));
    st.sub[0][0] = 1.0;
    return st;
}

DistributedState init_state(const ReferenceState& ref, const ClusterShape& shape) {
    DistributedState st = init_state(ref.n, shape);
    const int nl = st.layout.n_local;
    const std::uint64_t off_mask = (std::uint64_t{1} << nl) - 1;
    for (std::uint64_t b = 0; b < ref.amps.size(); ++b)
        st.sub[b >> nl][b & off_mask] = ref.amps[b];
    return st;
}

ReferenceState flatten(const DistributedState& state) {
    ReferenceState ref;
    ref.n = state.n;
    ref.amps.assign(std::uint64_t{1} << state.n, Amp{0.0, 0.0});
    const int nl = state.layout.n_local;
    for (int pe = 0; pe < state.shape.p; ++pe) {
        for (std::uint64_t off = 0; off < state.sub[static_cast<std::size_t>(pe)].size(); ++off) {
            std::uint64_t idx = (static_cast<std::uint64_t>(pe) << nl) | off;
            std::uint64_t b = 0;
            std::uint64_t rest = idx;
            while (rest) {
                int pos = std::countr_zero(rest);
                b |= qbit(state.layout.qubit_at[static_cast<std::size_t>(pos)]);
                rest &= rest - 1;
            }
            ref.amps[b] = state.sub[static_cast<std::size_t>(pe)][off];
        }
    }
    return ref;
}

void apply_gate_narrow(DistributedState& state, const Operator& gate, int workers) {
    if (gate.kind != OpKind::Gate) throw MissingPayload("operator is not a gate");
    if (!gate.payload) throw MissingPayload("gate " + std::to_string(gate.id) + " has no payload");
    if (classify_access(gate, state.layout) == Access::Wide)
        throw AccessViolation("gate " + std::to_string(gate.id) +
                              " targets a global qubit; reorder first");

    const GateMatrix& u = *gate.payload;
    const int k = gate.arity();
    std::vector<int> pos(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
        pos[static_cast<std::size_t>(j)] = state.layout.pos_of[static_cast<std::size_t>(gate.targets[static_cast<std::size_t>(j)])];
    std::vector<int> sorted_pos = pos;
    std::sort(sorted_pos.begin(), sorted_pos.end());

    const int dim = u.dim;
    const std::uint64_t groups = std::uint64_t{1} << (state.layout.n_local - k);

    for_each_pe(state.shape.p, workers, [&](int pe) {
        auto& v = state.sub[static_cast<std::size_t>(pe)];
        std::vector<Amp> in(static_cast<std::size_t>(dim));
        std::vector<std::uint64_t> idx(static_cast<std::size_t>(dim));
        for (std::uint64_t g = 0; g < groups; ++g) {
            std::uint64_t base = insert_zero_bits(g, sorted_pos);
            for (int m = 0; m < dim; ++m) {
                std::uint64_t i = base;
                for (int j = 0; j < k; ++j)
                    if ((m >> j) & 1) i |= qbit(pos[static_cast<std::size_t>(j)]);
                idx[static_cast<std::size_t>(m)] = i;
                in[static_cast<std::size_t>(m)] = v[i];
            }
            for (int r = 0; r < dim; ++r) {
                Amp acc = 0.0;
                for (int c = 0; c < dim; ++c) acc += u.at(r, c) * in[static_cast<std::size_t>(c)];
                v[idx[static_cast<std::size_t>(r)]] = acc;
            }
        }
    });
}

std::uint64_t perform_qr(DistributedState& state, const QrEvent& event) {
    if (!(event.before == state.layout))
        throw LayoutMismatch("event does not start from the current layout");
    event.after.check();

    const int n = state.n;
    const int nl = state.layout.n_local;
    const std::uint64_t off_mask = (std::uint64_t{1} << nl) - 1;

    // position map: bit at old position p moves to position dest[p]
    std::vector<int> dest(static_cast<std::size_t>(n));
    std::uint64_t stay = 0;
    for (int p = 0; p < n; ++p) {
        int q = event.before.qubit_at[static_cast<std::size_t>(p)];
        dest[static_cast<std::size_t>(p)] = event.after.pos_of[static_cast<std::size_t>(q)];
        if (dest[static_cast<std::size_t>(p)] == p) stay |= qbit(p);
    }
    std::vector<std::pair<int, int>> moved;
    for (int p = 0; p < n; ++p)
        if (!contains(stay, p)) moved.emplace_back(p, dest[static_cast<std::size_t>(p)]);

    std::vector<std::vector<Amp>> fresh(static_cast<std::size_t>(state.shape.p),
                                        std::vector<Amp>(off_mask + 1));
    std::uint64_t relocated = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t i = 0; i < total; ++i) {
        std::uint64_t j = i & stay;
        for (auto [from, to] : moved) j |= ((i >> from) & 1) << to;
        if ((j >> nl) != (i >> nl)) ++relocated;
        fresh[j >> nl][j & off_mask] = state.sub[i >> nl][i & off_mask];
    }
    state.sub = std::move(fresh);
    state.layout = event.after;
    state.last_relocated = relocated;
    state.total_relocated += relocated;
    state.qr_log.emplace_back(static_cast<int>(event.swaps.size()), relocated);
    return relocated;
}

void run_qsu(DistributedState& state, const Circuit& circuit, const Schedule& schedule,
             int workers) {
    std::size_t next_event = 0;
    for (int t = 0; t < static_cast<int>(schedule.tiles.size()); ++t) {
        while (next_event < schedule.qr_events.size() &&
               schedule.qr_events[next_event].before_tile == t)
            perform_qr(state, schedule.qr_events[next_event++]);
        for (int id : schedule.tiles[static_cast<std::size_t>(t)].gates)
            apply_gate_narrow(state, circuit.op(id), workers);
    }
}

double diag_expectation_term(const DistributedState& state, const PauliTerm& term) {
    MaskedTerm m = mask_term(term, state.layout);  // throws NotDiagonalizable on global X/Y
    Amp acc = 0.0;
    for (int pe = 0; pe < state.shape.p; ++pe)
        acc += pe_sign(pe, m.global_z) *
               local_pauli_expectation(state.sub[static_cast<std::size_t>(pe)], m);
    return acc.real();
}

Amp expectation(DistributedState& state, const PauliTilePlan& plan,
                const std::vector<PauliTerm>& terms, int workers) {
    std::vector<Amp> partial(static_cast<std::size_t>(state.shape.p), Amp{0.0, 0.0});

    for (const PauliTile& tile : plan.tiles) {
        if (state.layout.local_set() != tile.local_qubits) {
            auto ev = make_qr_event(state.layout, tile.local_qubits);
            if (ev) perform_qr(state, *ev);
        }
        // masks are layout-dependent; build them once per tile
        std::vector<MaskedTerm> masked;
        std::vector<Amp> coeffs;
        masked.reserve(tile.terms.size());
        for (int id : tile.terms) {
            const PauliTerm& term = terms[static_cast<std::size_t>(id)];
            MaskedTerm m;
            try {
                m = mask_term(term, state.layout);
            } catch (const NotDiagonalizable& e) {
                throw AccessViolation(std::string("term not narrow in its tile: ") + e.what());
            }
            if (!plan.diagonalized && m.global_z != 0)
                throw AccessViolation("term has a global Z but the plan is not diagonalized");
            masked.push_back(m);
            coeffs.push_back(term.coeff);
        }
        for_each_pe(state.shape.p, workers, [&](int pe) {
            Amp acc = 0.0;
            for (std::size_t i = 0; i < masked.size(); ++i)
                acc += coeffs[i] * pe_sign(pe, masked[i].global_z) *
                       local_pauli_expectation(state.sub[static_cast<std::size_t>(pe)], masked[i]);
            partial[static_cast<std::size_t>(pe)] += acc;
        });
    }
    Amp total = 0.0;
    for (int pe = 0; pe < state.shape.p; ++pe) total += partial[static_cast<std::size_t>(pe)];
    return total;
}

void dense_oracle_apply(ReferenceState& ref, const Operator& gate) {
    if (ref.n > kOracleMaxQubits)
        throw OracleTooLarge("dense oracle capped at " + std::to_string(kOracleMaxQubits) +
                             " qubits");
    if (gate.kind != OpKind::Gate) throw MissingPayload("operator is not a gate");
    if (!gate.payload) throw MissingPayload("gate has no payload");

    const GateMatrix& u = *gate.payload;
    const int k = gate.arity();
    std::vector<Amp> out(ref.amps.size(), Amp{0.0, 0.0});
    for (std::uint64_t i = 0; i < ref.amps.size(); ++i) {
        int row = 0;
        for (int j = 0; j < k; ++j)
            if (contains(i, gate.targets[static_cast<std::size_t>(j)])) row |= 1 << j;
        std::uint64_t cleared = i;
        for (int j = 0; j < k; ++j) cleared &= ~qbit(gate.targets[static_cast<std::size_t>(j)]);
        Amp acc = 0.0;
        for (int col = 0; col < u.dim; ++col) {
            std::uint64_t src = cleared;
            for (int j = 0; j < k; ++j)
                if ((col >> j) & 1) src |= qbit(gate.targets[static_cast<std::size_t>(j)]);
            acc += u.at(row, col) * ref.amps[src];
        }
        out[i] = acc;
    }
    ref.amps = std::move(out);
}

Amp dense_oracle_expectation(const ReferenceState& ref, const std::vector<PauliTerm>& terms) {
    if (ref.n > kOracleMaxQubits)
        throw OracleTooLarge("dense oracle capped at " + std::to_string(kOracleMaxQubits) +
                             " qubits");
    Amp total = 0.0;
    for (const PauliTerm& term : terms) {
        std::uint64_t xy = term.xy_targets();
        std::uint64_t sign_mask = 0;
        int y_count = 0;
        for (int q = 0; q < term.n(); ++q) {
            char c = term.letters[static_cast<std::size_t>(q)];
            if (c == 'Y') {
                sign_mask |= qbit(q);
                ++y_count;
            }
            if (c == 'Z') sign_mask |= qbit(q);
        }
        Amp acc = 0.0;
        for (std::uint64_t b = 0; b < ref.amps.size(); ++b) {
            double sgn = (std::popcount(b & sign_mask) & 1) ? -1.0 : 1.0;
            acc += sgn * std::conj(ref.amps[b ^ xy]) * ref.amps[b];
        }
        total += term.coeff * ipow(y_count) * acc;
    }
    return total;
}

double evaluate_energy(const Circuit& circuit, const Schedule& schedule,
                       const std::vector<PauliTerm>& terms, const PauliTilePlan& plan,
                       int workers) {
    DistributedState st = init_state(circuit.n, schedule.shape);
    run_qsu(st, circuit, schedule, workers);
    return expectation(st, plan, terms, workers).real();
}

void write_state_dump(std::ostream& out, const ReferenceState& ref, int p) {
    auto put_u64 = [&](std::uint64_t v) {
        char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out.write(buf, 8);
    };
    put_u64(static_cast<std::uint64_t>(ref.n));
    put_u64(static_cast<std::uint64_t>(p));
    for (const Amp& a : ref.amps) {
        double re = a.real(), im = a.imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(double));
        out.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
}

ReferenceState read_state_dump(std::istream& in, int* p_out) {
    auto get_u64 = [&]() {
        char buf[8];
        in.read(buf, 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
        return v;
    };
    ReferenceState ref;
    ref.n = static_cast<int>(get_u64());
    std::uint64_t p = get_u64();
    if (p_out) *p_out = static_cast<int>(p);
    if (ref.n < 0 || ref.n > kMaxQubits) throw ParseError("corrupt state dump header");
    ref.amps.resize(std::uint64_t{1} << ref.n);
    for (Amp& a : ref.amps) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), sizeof(double));
        in.read(reinterpret_cast<char*>(&im), sizeof(double));
        a = Amp{re, im};
    }
    if (!in) throw ParseError("truncated state dump");
    return ref;
}

}  // namespace qrtile
