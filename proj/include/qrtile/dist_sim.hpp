#pragma once

#include <iosfwd>

#include "qrtile/evc_scheduler.hpp"
#include "qrtile/schedule.hpp"

namespace qrtile {

/*
 * Dense state vector in canonical order: bit q of the index is the value
 * of qubit q. Serves as the oracle the distributed emulator is checked
 * against.
 */
struct ReferenceState {
    int n = 0;
    std::vector<Amp> amps;

    static ReferenceState zero(int n);
    double norm() const;
};

/*
 * Block-decomposed state vector emulating p PEs. PE j holds amplitudes
 * whose distributed index has top global bits equal to j; the layout maps
 * qubits to index bit positions.
 */
struct DistributedState {
    int n = 0;
    ClusterShape shape;
    QubitLayout layout;
    std::vector<std::vector<Amp>> sub;

    // accounting for reordering events
    std::uint64_t last_relocated = 0;
    std::uint64_t total_relocated = 0;
    std::vector<std::pair<int, std::uint64_t>> qr_log;  // (swap pairs, relocated)

    int n_local() const { return layout.n_local; }
    double norm() const;
};

DistributedState init_state(int n, const ClusterShape& shape);
DistributedState init_state(const ReferenceState& ref, const ClusterShape& shape);

// Canonical-order dense copy of the distributed state; inverse of
// init_state under the identity layout and invariant under perform_qr.
ReferenceState flatten(const DistributedState& state);

// Applies a gate whose targets are all local. Each PE transforms its
// sub-vector independently; `workers` > 1 spreads PEs across threads
// without changing results.
void apply_gate_narrow(DistributedState& state, const Operator& gate, int workers = 1);

// Relocates amplitudes according to the event's layout change. Returns
// the number of amplitudes whose owning PE changed.
std::uint64_t perform_qr(DistributedState& state, const QrEvent& event);

// Executes a schedule: reordering events at tile boundaries, gates in
// order.
void run_qsu(DistributedState& state, const Circuit& circuit, const Schedule& schedule,
             int workers = 1);

// Expectation value of a single term whose global letters are all I or Z:
// each PE contributes a sign-weighted local expectation, no reordering.
double diag_expectation_term(const DistributedState& state, const PauliTerm& term);

// Expectation of a term list under a tile plan. Reorders between tiles as
// needed; per-PE partial sums are reduced in ascending PE index.
Amp expectation(DistributedState& state, const PauliTilePlan& plan,
                const std::vector<PauliTerm>& terms, int workers = 1);

/*
 * Dense oracle path, independent of the distributed kernels.
 */
void dense_oracle_apply(ReferenceState& ref, const Operator& gate);
Amp dense_oracle_expectation(const ReferenceState& ref, const std::vector<PauliTerm>& terms);

inline constexpr int kOracleMaxQubits = 14;

// Schedule + plan executed from the zero state: one variational energy
// evaluation.
double evaluate_energy(const Circuit& circuit, const Schedule& schedule,
                       const std::vector<PauliTerm>& terms, const PauliTilePlan& plan,
                       int workers = 1);

/*
 * State dump: header of two little-endian uint64 (n, p) followed by
 * canonical-order amplitudes as little-endian (re, im) double pairs.
 */
void write_state_dump(std::ostream& out, const ReferenceState& ref, int p);
ReferenceState read_state_dump(std::istream& in, int* p_out = nullptr);

}  // namespace qrtile
