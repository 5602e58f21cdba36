#include "qrtile/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace qrtile {

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u = 1.0 - uniform();  // (0, 1]
    double v = uniform();
    double r = std::sqrt(-2.0 * std::log(u));
    double theta = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

int Rng::below(int bound) {
    if (bound <= 0) throw ConfigError("rng bound must be positive");
    std::uint64_t b = static_cast<std::uint64_t>(bound);
    std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % b + 1) % b;
    while (true) {
        std::uint64_t x = next();
        if (rem == 0 || x <= std::numeric_limits<std::uint64_t>::max() - rem)
            return static_cast<int>(x % b);
    }
}

GateMatrix random_unitary(int k_qubits, std::uint64_t seed) {
    const int dim = 1 << k_qubits;
    Rng rng(seed);
    GateMatrix u(dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) u.at(r, c) = Amp{rng.normal(), rng.normal()};

    // modified Gram-Schmidt over columns, repeated once
    for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < dim; ++c) {
            for (int prev = 0; prev < c; ++prev) {
                Amp dot = 0.0;
                for (int r = 0; r < dim; ++r) dot += std::conj(u.at(r, prev)) * u.at(r, c);
                for (int r = 0; r < dim; ++r) u.at(r, c) -= dot * u.at(r, prev);
            }
            double nrm = 0.0;
            for (int r = 0; r < dim; ++r) nrm += std::norm(u.at(r, c));
            nrm = std::sqrt(nrm);
            for (int r = 0; r < dim; ++r) u.at(r, c) /= nrm;
        }
    }
    return u;
}

int gatefabric_block_count(int n, int layers) {
    return layers * (n / 4 + (n - 2) / 4);
}

Circuit gen_gatefabric(const GateFabricSpec& spec) {
    if (spec.n < 4) throw CircuitTooSmall("GateFabric needs at least 4 qubits");
    if (spec.n % 2 != 0) throw ConfigError("GateFabric needs an even qubit count");
    if (spec.layers < 1) throw ConfigError("GateFabric needs at least one layer");

    Circuit c;
    c.n = spec.n;
    Rng master(spec.seed);
    int id = 0;
    for (int layer = 0; layer < spec.layers; ++layer) {
        for (int start = 0; start + 3 < spec.n; start += 4) {
            GatePayload p =
                spec.payloads ? std::make_shared<GateMatrix>(random_unitary(4, master.next()))
                              : nullptr;
            c.operators.push_back(make_gate(id++, {start, start + 1, start + 2, start + 3}, p));
        }
        for (int start = 2; start + 3 < spec.n; start += 4) {
            GatePayload p =
                spec.payloads ? std::make_shared<GateMatrix>(random_unitary(4, master.next()))
                              : nullptr;
            c.operators.push_back(make_gate(id++, {start, start + 1, start + 2, start + 3}, p));
        }
    }
    return c;
}

namespace {

std::string z_chain_letters(int n, const std::vector<std::pair<int, char>>& put,
                            const std::vector<std::pair<int, int>>& chains) {
    std::string s(static_cast<std::size_t>(n), 'I');
    for (auto [lo, hi] : chains)
        for (int q = lo + 1; q < hi; ++q) s[static_cast<std::size_t>(q)] = 'Z';
    for (auto [q, c] : put) s[static_cast<std::size_t>(q)] = c;
    return s;
}

}  // namespace

std::vector<PauliTerm> gen_synthetic_jw(int n, std::uint64_t seed, int max_span) {
    if (n < 2) throw ConfigError("Hamiltonian generator needs at least 2 qubits");
    const int span_limit = max_span > 0 ? max_span : n;
    Rng rng(seed);
    std::vector<PauliTerm> terms;
    auto coeff = [&]() { return Amp{rng.uniform(-1.0, 1.0), 0.0}; };

    terms.push_back(PauliTerm{coeff(), std::string(static_cast<std::size_t>(n), 'I')});
    for (int i = 0; i < n; ++i)
        terms.push_back(PauliTerm{coeff(), z_chain_letters(n, {{i, 'Z'}}, {})});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (j - i + 1 > span_limit) continue;
            terms.push_back(PauliTerm{coeff(), z_chain_letters(n, {{i, 'Z'}, {j, 'Z'}}, {})});
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (j - i + 1 > span_limit) continue;
            terms.push_back(
                PauliTerm{coeff(), z_chain_letters(n, {{i, 'X'}, {j, 'X'}}, {{i, j}})});
            terms.push_back(
                PauliTerm{coeff(), z_chain_letters(n, {{i, 'Y'}, {j, 'Y'}}, {{i, j}})});
        }
    static const char* kQuartic[4][4] = {{"X", "X", "X", "X"},
                                         {"X", "X", "Y", "Y"},
                                         {"Y", "Y", "X", "X"},
                                         {"Y", "Y", "Y", "Y"}};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    if (l - i + 1 > span_limit) continue;
                    for (const auto& pat : kQuartic) {
                        terms.push_back(PauliTerm{
                            coeff(), z_chain_letters(n,
                                                     {{i, pat[0][0]},
                                                      {j, pat[1][0]},
                                                      {k, pat[2][0]},
                                                      {l, pat[3][0]}},
                                                     {{i, j}, {k, l}})});
                    }
                }
    return terms;
}

std::uint64_t synthetic_jw_term_count(int n, int max_span) {
    // unbounded span: 1 + n + 3*C(n,2) + 4*C(n,4)
    const int span_limit = max_span > 0 ? max_span : n;
    std::uint64_t count = 1 + static_cast<std::uint64_t>(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (j - i + 1 <= span_limit) count += 3;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = k + 1; l < n; ++l)
                    if (l - i + 1 <= span_limit) count += 4;
    return count;
}

Circuit gen_random_circuit(int n, int m, std::uint64_t seed, int max_arity, bool payloads) {
    if (max_arity < 1 || max_arity > n) throw ConfigError("bad gate arity bound");
    Rng rng(seed);
    Circuit c;
    c.n = n;
    for (int id = 0; id < m; ++id) {
        int arity = 1 + rng.below(max_arity);
        std::vector<int> targets;
        while (static_cast<int>(targets.size()) < arity) {
            int q = rng.below(n);
            if (std::find(targets.begin(), targets.end(), q) == targets.end())
                targets.push_back(q);
        }
        GatePayload p =
            payloads ? std::make_shared<GateMatrix>(random_unitary(arity, rng.next())) : nullptr;
        c.operators.push_back(make_gate(id, std::move(targets), p));
    }
    return c;
}

ReferenceState random_state(int n, std::uint64_t seed) {
    Rng rng(seed);
    ReferenceState ref;
    ref.n = n;
    ref.amps.resize(std::uint64_t{1} << n);
    double nrm = 0.0;
    for (Amp& a : ref.amps) {
        a = Amp{rng.normal(), rng.normal()};
        nrm += std::norm(a);
    }
    nrm = std::sqrt(nrm);
    for (Amp& a : ref.amps) a /= nrm;
    return ref;
}

void seed_payloads(Circuit& circuit, std::uint64_t seed) {
    Rng master(seed);
    for (Operator& op : circuit.operators) {
        std::uint64_t s = master.next();
        if (op.kind == OpKind::Gate && !op.payload)
            op.payload = std::make_shared<GateMatrix>(random_unitary(op.arity(), s));
    }
}

std::vector<std::string> fixture_circuit_names() {
    return {"fig2", "fig3", "fig7", "gatefabric-fig6"};
}

Circuit fixture_circuit(const std::string& name, std::uint64_t seed) {
    auto build = [](int n, const std::vector<std::vector<int>>& targets) {
        Circuit c;
        c.n = n;
        int id = 0;
        for (const auto& t : targets) c.operators.push_back(make_gate(id++, t));
        return c;
    };
    Circuit c;
    if (name == "fig2") {
        // dependencies: 0>2, 1>2, 2>3, 2>4
        c = build(4, {{0, 1}, {2, 3}, {1, 2}, {1}, {2}});
    } else if (name == "fig3") {
        // narrow: 0 and 3; wide: 1, 2, 4 (p = 4)
        c = build(4, {{0, 1}, {2, 3}, {1, 2}, {0, 1}, {0, 3}});
    } else if (name == "fig7") {
        // two-tile circuit: first tile {0,1,3,5}, then remap to {2,3,4,5}
        c = build(6, {{0, 1}, {2, 3}, {4, 5}, {0, 1}, {3, 4}, {0, 2}, {2, 3}, {4, 5}});
    } else if (name == "gatefabric-fig6") {
        return gen_gatefabric(GateFabricSpec{16, 6, seed, true});
    } else {
        throw ConfigError("unknown circuit fixture: " + name);
    }
    seed_payloads(c, seed);
    return c;
}

ClusterShape fixture_shape(const std::string& name) {
    if (name == "fig2" || name == "fig3") return ClusterShape::flat(4);
    if (name == "fig7") return ClusterShape::flat(4);
    if (name == "gatefabric-fig6") return ClusterShape::two_level(4, 4);
    throw ConfigError("unknown circuit fixture: " + name);
}

std::vector<std::string> fixture_hamiltonian_names() {
    return {"evc-diagram", "three-term", "jw8", "jw10", "jw12"};
}

std::vector<PauliTerm> fixture_hamiltonian(const std::string& name, int* n_out) {
    auto letters = [](int n, const std::vector<std::pair<int, char>>& put) {
        std::string s(static_cast<std::size_t>(n), 'I');
        for (auto [q, ch] : put) s[static_cast<std::size_t>(q)] = ch;
        return s;
    };
    std::vector<PauliTerm> terms;
    int n = 0;
    if (name == "evc-diagram") {
        n = 8;
        terms.push_back({1.0, letters(n, {{0, 'Z'}, {1, 'Y'}, {3, 'X'}, {4, 'Y'}, {7, 'Z'}})});
        terms.push_back({1.0, letters(n, {{2, 'X'}, {6, 'Z'}, {7, 'X'}})});
        terms.push_back({1.0, letters(n, {{0, 'X'}, {3, 'Y'}, {4, 'Z'}, {6, 'X'}})});
    } else if (name == "three-term") {
        n = 4;
        terms.push_back({1.0, letters(n, {{0, 'Z'}, {1, 'Z'}})});
        terms.push_back({1.0, letters(n, {{0, 'X'}, {1, 'X'}})});
        terms.push_back({1.0, letters(n, {{2, 'X'}, {3, 'X'}})});
    } else if (name == "jw8" || name == "jw10" || name == "jw12") {
        n = std::stoi(name.substr(2));
        terms = gen_synthetic_jw(n, 1);
    } else {
        throw ConfigError("unknown Hamiltonian fixture: " + name);
    }
    if (n_out) *n_out = n;
    return terms;
}

namespace {

struct Line {
    int number = 0;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        Line line{number, {}};
        std::string tok;
        while (ls >> tok) line.tokens.push_back(tok);
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

ParseError at_line(int number, const std::string& msg) {
    return ParseError("line " + std::to_string(number) + ": " + msg);
}

int parse_int(const Line& line, const std::string& tok) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw at_line(line.number, "expected an integer, got '" + tok + "'");
    }
}

double parse_double(const Line& line, const std::string& tok) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw at_line(line.number, "expected a number, got '" + tok + "'");
    }
}

// "X12" -> ('X', 12)
std::pair<char, int> parse_letter_qubit(const Line& line, const std::string& tok) {
    if (tok.size() < 2 || (tok[0] != 'X' && tok[0] != 'Y' && tok[0] != 'Z'))
        throw at_line(line.number, "expected <letter><qubit>, got '" + tok + "'");
    return {tok[0], parse_int(line, tok.substr(1))};
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
    struct RawOp {
        int line = 0;
        char kind = 'G';
        int id = 0;
        std::vector<int> qubits;          // gate targets
        std::vector<std::pair<char, int>> pauli;  // pauli letters
    };
    std::vector<RawOp> raw;
    int declared_n = -1;
    int max_qubit = -1;
    for (const Line& line : tokenize(text)) {
        const auto& t = line.tokens;
        if (t[0] == "n") {
            if (t.size() != 2) throw at_line(line.number, "expected 'n <count>'");
            declared_n = parse_int(line, t[1]);
            continue;
        }
        if (t[0] != "G" && t[0] != "P")
            throw at_line(line.number, "expected 'G' or 'P' line, got '" + t[0] + "'");
        if (t.size() < 2) throw at_line(line.number, "missing operator id");
        RawOp op;
        op.line = line.number;
        op.kind = t[0][0];
        op.id = parse_int(line, t[1]);
        if (op.kind == 'G') {
            if (t.size() < 3) throw at_line(line.number, "gate needs at least one target");
            for (std::size_t i = 2; i < t.size(); ++i) {
                op.qubits.push_back(parse_int(line, t[i]));
                max_qubit = std::max(max_qubit, op.qubits.back());
            }
        } else {
            for (std::size_t i = 2; i < t.size(); ++i) {
                op.pauli.push_back(parse_letter_qubit(line, t[i]));
                max_qubit = std::max(max_qubit, op.pauli.back().second);
            }
        }
        raw.push_back(std::move(op));
    }
    int n = declared_n >= 0 ? declared_n : max_qubit + 1;
    if (n <= 0) throw ParseError("cannot determine qubit count");

    Circuit c;
    c.n = n;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const RawOp& op = raw[i];
        if (op.id != static_cast<int>(i))
            throw at_line(op.line, "operator ids must be dense and in file order");
        if (op.kind == 'G') {
            for (int q : op.qubits)
                if (q < 0 || q >= n)
                    throw IndexError("line " + std::to_string(op.line) + ": qubit " +
                                     std::to_string(q) + " out of range");
            c.operators.push_back(make_gate(op.id, op.qubits));
        } else {
            std::string letters(static_cast<std::size_t>(n), 'I');
            for (auto [ch, q] : op.pauli) {
                if (q < 0 || q >= n)
                    throw IndexError("line " + std::to_string(op.line) + ": qubit " +
                                     std::to_string(q) + " out of range");
                letters[static_cast<std::size_t>(q)] = ch;
            }
            c.operators.push_back(make_pauli_op(op.id, letters));
        }
    }
    c.validate();
    return c;
}

std::string serialize_circuit(const Circuit& circuit) {
    std::ostringstream out;
    out << "n " << circuit.n << "\n";
    for (const Operator& op : circuit.operators) {
        if (op.kind == OpKind::Gate) {
            out << "G " << op.id;
            for (int q : op.targets) out << " " << q;
        } else {
            out << "P " << op.id;
            for (int q : op.targets)
                out << " " << op.letters[static_cast<std::size_t>(q)] << q;
        }
        out << "\n";
    }
    return out.str();
}

std::vector<PauliTerm> parse_hamiltonian(const std::string& text, int* n_out) {
    struct RawTerm {
        int line = 0;
        double re = 0.0, im = 0.0;
        std::vector<std::pair<char, int>> pauli;
    };
    std::vector<RawTerm> raw;
    int declared_n = -1;
    int max_qubit = -1;
    for (const Line& line : tokenize(text)) {
        const auto& t = line.tokens;
        if (t[0] == "n") {
            if (t.size() != 2) throw at_line(line.number, "expected 'n <count>'");
            declared_n = parse_int(line, t[1]);
            continue;
        }
        if (t.size() < 2) throw at_line(line.number, "expected '<re> <im> [letters...]'");
        RawTerm term;
        term.line = line.number;
        term.re = parse_double(line, t[0]);
        term.im = parse_double(line, t[1]);
        for (std::size_t i = 2; i < t.size(); ++i) {
            term.pauli.push_back(parse_letter_qubit(line, t[i]));
            max_qubit = std::max(max_qubit, term.pauli.back().second);
        }
        raw.push_back(std::move(term));
    }
    int n = declared_n >= 0 ? declared_n : max_qubit + 1;
    if (n <= 0 && !raw.empty()) throw ParseError("cannot determine qubit count");
    if (n <= 0) n = 1;

    std::vector<PauliTerm> terms;
    for (const RawTerm& rt : raw) {
        std::string letters(static_cast<std::size_t>(n), 'I');
        for (auto [ch, q] : rt.pauli) {
            if (q < 0 || q >= n)
                throw IndexError("line " + std::to_string(rt.line) + ": qubit " +
                                 std::to_string(q) + " out of range");
            letters[static_cast<std::size_t>(q)] = ch;
        }
        terms.push_back(PauliTerm{Amp{rt.re, rt.im}, std::move(letters)});
    }
    if (n_out) *n_out = n;
    return terms;
}

std::string serialize_hamiltonian(const std::vector<PauliTerm>& terms, int n) {
    std::ostringstream out;
    out << "n " << n << "\n";
    for (const PauliTerm& term : terms) {
        out << format_double(term.coeff.real()) << " " << format_double(term.coeff.imag());
        for (int q = 0; q < term.n(); ++q) {
            char c = term.letters[static_cast<std::size_t>(q)];
            if (c != 'I') out << " " << c << q;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace qrtile
