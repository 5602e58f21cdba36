#include "qrtile/types.hpp"

#include <algorithm>
#include <cmath>

namespace qrtile {

QubitSet mask_of(const std::vector<int>& qubits) {
    QubitSet s = 0;
    for (int q : qubits) s |= qbit(q);
    return s;
}

std::vector<int> set_to_vector(QubitSet s) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(set_size(s)));
    while (s) {
        int q = std::countr_zero(s);
        out.push_back(q);
        s &= s - 1;
    }
    return out;
}

double GateMatrix::unitarity_defect() const {
    double worst = 0.0;
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            Amp acc = 0.0;
            for (int k = 0; k < dim; ++k) acc += at(r, k) * std::conj(at(c, k));
            if (r == c) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

void validate_letters(const std::string& letters) {
    for (char c : letters) {
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
            throw ParseError(std::string("invalid Pauli letter '") + c + "'");
    }
}

QubitSet PauliTerm::plain_targets() const {
    QubitSet s = 0;
    for (int q = 0; q < n(); ++q)
        if (letters[static_cast<std::size_t>(q)] != 'I') s |= qbit(q);
    return s;
}

QubitSet PauliTerm::xy_targets() const {
    QubitSet s = 0;
    for (int q = 0; q < n(); ++q) {
        char c = letters[static_cast<std::size_t>(q)];
        if (c == 'X' || c == 'Y') s |= qbit(q);
    }
    return s;
}

QubitSet PauliTerm::z_targets() const {
    QubitSet s = 0;
    for (int q = 0; q < n(); ++q)
        if (letters[static_cast<std::size_t>(q)] == 'Z') s |= qbit(q);
    return s;
}

}  // namespace qrtile
