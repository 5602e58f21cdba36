#pragma once

#include <random>

#include "qrtile/circuit.hpp"
#include "qrtile/dist_sim.hpp"

namespace qrtile {

/*
 * Deterministic RNG helpers. Distribution shapes are hand-rolled on top
 * of mt19937_64 so generated payloads are bit-identical across standard
 * library implementations.
 */
struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    std::uint64_t next() { return engine(); }
    // uniform in [0, 1)
    double uniform() { return std::ldexp(static_cast<double>(engine() >> 11), -53); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // standard normal via Box-Muller
    double normal();
    int below(int bound);  // uniform integer in [0, bound)

  private:
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Haar-ish random unitary on k qubits: Gaussian matrix orthonormalized by
// modified Gram-Schmidt with one re-orthogonalization pass.
GateMatrix random_unitary(int k_qubits, std::uint64_t seed);

/*
 * GateFabric-style brick-wall circuit: per layer, 4-qubit blocks on
 * {4k..4k+3}, then offset blocks on {4k+2..4k+5}, each sub-layer ordered
 * by lowest qubit. Payloads are seeded random 4-qubit unitaries.
 */
struct GateFabricSpec {
    int n = 4;
    int layers = 1;
    std::uint64_t seed = 1;
    bool payloads = true;
};

Circuit gen_gatefabric(const GateFabricSpec& spec);
int gatefabric_block_count(int n, int layers);

/*
 * Synthetic Jordan-Wigner-patterned Hamiltonian: diagonal Z/ZZ terms,
 * quadratic X/Y pairs with Z chains, and quartic four-letter terms with Z
 * chains between consecutive pairs. max_span > 0 restricts every term's
 * non-identity letters to a window of that many qubits.
 */
std::vector<PauliTerm> gen_synthetic_jw(int n, std::uint64_t seed, int max_span = 0);
std::uint64_t synthetic_jw_term_count(int n, int max_span = 0);

Circuit gen_random_circuit(int n, int m, std::uint64_t seed, int max_arity = 2,
                           bool payloads = true);
ReferenceState random_state(int n, std::uint64_t seed);

/*
 * Bundled example circuits and Hamiltonians with the documented
 * dependency lists, access classes, and reordering counts.
 */
std::vector<std::string> fixture_circuit_names();
Circuit fixture_circuit(const std::string& name, std::uint64_t seed = 1);
// Cluster shape each circuit fixture is meant to run on.
ClusterShape fixture_shape(const std::string& name);

std::vector<std::string> fixture_hamiltonian_names();
std::vector<PauliTerm> fixture_hamiltonian(const std::string& name, int* n_out);

/*
 * Text formats. Circuits: optional "n <N>" line, then one operator per
 * line: "G <id> <q0> <q1> ..." or "P <id> <letter><qubit> ...", comments
 * starting with '#'. Hamiltonians: optional "n <N>" line, then
 * "<re> <im> <letter><qubit> ..." per term; an empty letter list is the
 * identity term.
 */
Circuit parse_circuit(const std::string& text);
std::string serialize_circuit(const Circuit& circuit);
std::vector<PauliTerm> parse_hamiltonian(const std::string& text, int* n_out = nullptr);
std::string serialize_hamiltonian(const std::vector<PauliTerm>& terms, int n);

// Attaches seeded random payloads to every payload-free gate.
void seed_payloads(Circuit& circuit, std::uint64_t seed);

}  // namespace qrtile
