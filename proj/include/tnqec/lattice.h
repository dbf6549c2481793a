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

#ifndef TNQEC_LATTICE_H
#define TNQEC_LATTICE_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "tnqec/pauli.h"

namespace tnqec {

enum class CheckType : std::uint8_t { X, Z };

/// A check face. (row, col) is its plaquette coordinate: the face spans sites
/// (row..row+1, col..col+1) clipped to the lattice, so boundary faces have row or col
/// equal to -1 or to the last plaquette index + 1.
struct Face {
    CheckType type;
    int row;
    int col;
    std::vector<std::size_t> sites;
};

/// Surface code with qubits on the vertices of a width x height grid.
///
/// Site (r, c) has index r * width + c; row 0 is the top. Plaquettes are coloured as a
/// checkerboard, (row + col) even carrying an X check. Weight-2 boundary faces carry X
/// checks on the left and right edges and Z checks on the top and bottom edges, giving
/// width * height - 1 independent checks. Z-bar is Z on the left column (length
/// height), X-bar is X on the bottom row (length width). Faces within each type are
/// ordered row-major by plaquette coordinate; syndromes follow that order.
class Lattice {
   public:
    /// Throws DomainError for width or height below 2.
    static Lattice build(std::size_t width, std::size_t height);

    std::size_t width() const {
        return width_;
    }
    std::size_t height() const {
        return height_;
    }
    std::size_t num_qubits() const {
        return width_ * height_;
    }
    std::size_t num_checks() const {
        return faces_.size();
    }
    std::size_t site(std::size_t row, std::size_t col) const {
        return row * width_ + col;
    }
    std::size_t row_of(std::size_t q) const {
        return q / width_;
    }
    std::size_t col_of(std::size_t q) const {
        return q % width_;
    }

    /// All faces: X faces first, then Z faces.
    const std::vector<Face> &faces() const {
        return faces_;
    }
    std::size_t num_x_faces() const {
        return num_x_;
    }
    std::size_t num_z_faces() const {
        return faces_.size() - num_x_;
    }
    const Face &x_face(std::size_t k) const {
        return faces_[k];
    }
    const Face &z_face(std::size_t k) const {
        return faces_[num_x_ + k];
    }
    /// Index into faces() of the face at plaquette (row, col), or -1.
    int face_at(int row, int col) const;
    /// Indices into faces() of every face containing site q.
    const std::vector<std::size_t> &faces_of_site(std::size_t q) const {
        return site_faces_[q];
    }

    const std::vector<std::size_t> &z_logical_support() const {
        return z_logical_;
    }
    const std::vector<std::size_t> &x_logical_support() const {
        return x_logical_;
    }
    /// Pauli factor of logical L on site q (Y-bar = i X-bar Z-bar is Y on the shared corner).
    Pauli logical_on_site(Logical logical, std::size_t q) const;

    /// Horizontally and vertically adjacent site pairs, row-major.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;

    nlohmann::json to_json() const;

   private:
    Lattice() = default;

    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::size_t num_x_ = 0;
    std::vector<Face> faces_;
    std::vector<std::vector<std::size_t>> site_faces_;
    std::vector<int> face_grid_;
    std::vector<std::size_t> z_logical_;
    std::vector<std::size_t> x_logical_;
};

/// Pauli operator up to phase: bit x[q] marks an X factor on q, z[q] a Z factor.
struct PauliFrame {
    std::vector<std::uint8_t> x;
    std::vector<std::uint8_t> z;

    PauliFrame() = default;
    explicit PauliFrame(std::size_t n) : x(n, 0), z(n, 0) {
    }

    std::size_t num_qubits() const {
        return x.size();
    }
    std::size_t weight() const;
    std::size_t x_weight() const;
    std::size_t z_weight() const;
    Pauli at(std::size_t q) const {
        return pauli_from_parts(x[q] != 0, z[q] != 0);
    }
    /// Composition: symmetric difference of both flip sets.
    PauliFrame &operator^=(const PauliFrame &other);
    bool operator==(const PauliFrame &other) const = default;
};

PauliFrame operator^(PauliFrame a, const PauliFrame &b);

/// One +1/-1 outcome per X face and per Z face, in lattice face order.
struct Syndrome {
    std::vector<std::int8_t> x;
    std::vector<std::int8_t> z;

    static Syndrome trivial(const Lattice &lat);
    bool is_trivial() const;
    std::size_t num_flipped() const;
    /// Outcome of face k of lattice.faces() (X faces first).
    int outcome(std::size_t face) const {
        return face < x.size() ? x[face] : z[face - x.size()];
    }
    void set_outcome(std::size_t face, int value);
    /// Bit k set when face k of lattice.faces() reads -1.
    /// Throws CapacityError for more than 64 checks.
    std::uint64_t key() const;
    static Syndrome from_key(std::uint64_t key, const Lattice &lat);
    /// '0'/'1' per face in lattice face order; usable as a map key at any size.
    std::string bits() const;
    bool operator==(const Syndrome &other) const = default;
};

/// Throws DomainError if the frame does not match the lattice size.
Syndrome syndrome_of(const PauliFrame &frame, const Lattice &lat);

/// Canonical recovery: a Z string from each flipped X face straight up its column to the
/// top boundary and an X string from each flipped Z face along its row to the left
/// boundary, both starting at the face's upper-left qubit.
PauliFrame recovery_frame(const Syndrome &s, const Lattice &lat);

/// Logical class of a syndrome-free frame. Throws PreconditionError otherwise.
Logical homology_class(const PauliFrame &frame, const Lattice &lat);

/// Frame implementing the given logical operator on its canonical support.
PauliFrame logical_frame(Logical logical, const Lattice &lat);

}  // namespace tnqec

#endif
