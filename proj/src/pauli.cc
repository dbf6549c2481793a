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

#include "tnqec/pauli.h"

#include "tnqec/errors.h"

namespace tnqec {

PhasedPauli multiply(Pauli a, Pauli b) {
    using C = std::complex<double>;
    if (a == Pauli::I) {
        return {C{1}, b};
    }
    if (b == Pauli::I) {
        return {C{1}, a};
    }
    if (a == b) {
        return {C{1}, Pauli::I};
    }
    // The third Pauli; the phase is +i for cyclic order X->Y->Z.
    auto ia = static_cast<int>(a), ib = static_cast<int>(b);
    auto third = static_cast<Pauli>(6 - ia - ib);
    bool cyclic = (ib - ia + 3) % 3 == 1;
    return {cyclic ? C{0, 1} : C{0, -1}, third};
}

PhasedPauli from_xz(bool x, bool z) {
    if (x && z) {
        return {std::complex<double>{0, -1}, Pauli::Y};
    }
    return {std::complex<double>{1}, pauli_from_parts(x, z)};
}

char pauli_char(Pauli p) {
    return "IXYZ"[static_cast<int>(p)];
}

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I':
            return Pauli::I;
        case 'X':
            return Pauli::X;
        case 'Y':
            return Pauli::Y;
        case 'Z':
            return Pauli::Z;
        default:
            throw DomainError(std::string("not a Pauli label: ") + c);
    }
}

}  // namespace tnqec
