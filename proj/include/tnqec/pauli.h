// Copyright 2026 The tnqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TNQEC_PAULI_H
#define TNQEC_PAULI_H

#include <complex>
#include <cstdint>
#include <string>

namespace tnqec {

/// Single-qubit Pauli in the fixed order I, X, Y, Z (also the PTM basis order).
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Logical Pauli of the encoded qubit; same ordering and tie-break order I < X < Y < Z.
using Logical = Pauli;

struct PhasedPauli {
    std::complex<double> phase;
    Pauli pauli;
};

/// Product a*b with its phase, e.g. X*Z = -i Y.
PhasedPauli multiply(Pauli a, Pauli b);

/// X^x Z^z as a phased Pauli (X*Z = -i Y).
PhasedPauli from_xz(bool x, bool z);

inline bool x_part(Pauli p) {
    return p == Pauli::X || p == Pauli::Y;
}
inline bool z_part(Pauli p) {
    return p == Pauli::Z || p == Pauli::Y;
}
inline Pauli pauli_from_parts(bool x, bool z) {
    return x ? (z ? Pauli::Y : Pauli::X) : (z ? Pauli::Z : Pauli::I);
}

inline bool anticommute(Pauli a, Pauli b) {
    return a != Pauli::I && b != Pauli::I && a != b;
}

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

}  // namespace tnqec

#endif
