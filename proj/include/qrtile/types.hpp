#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrtile {

using Amp = std::complex<double>;
using QubitSet = std::uint64_t;

inline constexpr int kMaxQubits = 64;

constexpr QubitSet qbit(int q) { return QubitSet{1} << q; }
constexpr bool contains(QubitSet s, int q) { return (s >> q) & QubitSet{1}; }
constexpr bool is_subset(QubitSet a, QubitSet b) { return (a & ~b) == 0; }
inline int set_size(QubitSet s) { return std::popcount(s); }

QubitSet mask_of(const std::vector<int>& qubits);
std::vector<int> set_to_vector(QubitSet s);

// Contiguous set {0,1,...,k-1}.
constexpr QubitSet low_set(int k) {
    return k >= kMaxQubits ? ~QubitSet{0} : (QubitSet{1} << k) - 1;
}

/*
 * Error types. Every failure mode in the library throws one of these;
 * the what() string carries context.
 */
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidSchedule : Error { using Error::Error; };
struct GateTooWide : Error { using Error::Error; };
struct SchedulerStuck : Error { using Error::Error; };
struct DegenerateQr : Error { using Error::Error; };
struct TooManyPEs : Error { using Error::Error; };
struct AccessViolation : Error { using Error::Error; };
struct LayoutMismatch : Error { using Error::Error; };
struct NotDiagonalizable : Error { using Error::Error; };
struct OracleTooLarge : Error { using Error::Error; };
struct MissingPayload : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct IndexError : Error { using Error::Error; };
struct TermTooWide : Error { using Error::Error; };
struct CircuitTooSmall : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

/*
 * Dense complex matrix of dimension 2^k x 2^k, row major. Gate payloads
 * are shared by reference so target-map-only circuits stay cheap.
 */
struct GateMatrix {
    int dim = 0;
    std::vector<Amp> a;

    GateMatrix() = default;
    explicit GateMatrix(int d) : dim(d), a(static_cast<std::size_t>(d) * d) {}

    Amp& at(int r, int c) { return a[static_cast<std::size_t>(r) * dim + c]; }
    const Amp& at(int r, int c) const { return a[static_cast<std::size_t>(r) * dim + c]; }

    // max |U U^dagger - I| entry
    double unitarity_defect() const;
    bool is_unitary(double tol = 1e-12) const { return unitarity_defect() <= tol; }
};

using GatePayload = std::shared_ptr<const GateMatrix>;

/*
 * One Hamiltonian term: complex coefficient and a Pauli word stored as a
 * letter per qubit ('I', 'X', 'Y', 'Z'); letters.size() == n.
 */
struct PauliTerm {
    Amp coeff;
    std::string letters;

    int n() const { return static_cast<int>(letters.size()); }
    // Positions of all non-identity letters.
    QubitSet plain_targets() const;
    // Positions of X/Y letters only.
    QubitSet xy_targets() const;
    QubitSet z_targets() const;
};

void validate_letters(const std::string& letters);

}  // namespace qrtile
