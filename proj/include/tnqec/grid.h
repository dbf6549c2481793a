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

#ifndef TNQEC_GRID_H
#define TNQEC_GRID_H

#include <cstddef>
#include <limits>
#include <vector>

#include "tnqec/tensor.h"

namespace tnqec {

/// Bond cap meaning "never truncate by count".
inline constexpr std::size_t kUnboundedBond = std::numeric_limits<std::size_t>::max();

/// Rectangular network of cells with labels "up", "down", "left", "right".
///
/// Every cell carries all four labels; indices pointing off the grid have dimension 1.
struct GridNetwork {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Tensor> cells;

    GridNetwork() = default;
    GridNetwork(std::size_t rows, std::size_t cols);

    Tensor &at(std::size_t r, std::size_t c) {
        return cells[r * cols + c];
    }
    const Tensor &at(std::size_t r, std::size_t c) const {
        return cells[r * cols + c];
    }

    /// Throws StructuralError if labels are missing, boundary legs are not trivial, or
    /// neighboring legs disagree in dimension.
    void validate() const;

    /// Mirror across the main diagonal: rows become columns, up<->left, down<->right.
    GridNetwork transposed() const;
};

/// Boundary matrix-product state swept across a GridNetwork column by column.
///
/// Site k has labels "l" (bond to site k-1), "r" (bond to site k+1) and "p" (the
/// leg facing the unabsorbed columns). The represented vector is
/// exp(log_scale) times the contraction of the site tensors.
struct BoundaryChain {
    std::vector<Tensor> sites;
    std::size_t max_bond = kUnboundedBond;
    double tol = 1e-14;
    double log_scale = 0;
    /// Sum over truncation passes of the discarded weight relative to the chain norm.
    double truncation_error = 0;
    /// Set once the chain has become exactly zero.
    bool zero = false;

    std::size_t max_bond_dim() const;
};

struct GridValue {
    cplx mantissa{0};
    double log_scale = 0;
    double truncation_error = 0;

    cplx value() const;
};

/// Chain built from column `col`, canonicalized and truncated.
BoundaryChain start_chain(const GridNetwork &net, std::size_t col, std::size_t max_bond, double tol);

/// Absorbs column `col` from the left, then canonicalizes, truncates and rescales.
void absorb_column(BoundaryChain &chain, const GridNetwork &net, std::size_t col);

/// Left-to-right (top-to-bottom) QR sweep leaving every site but the last isometric.
void canonicalize(BoundaryChain &chain);

/// Bottom-to-top SVD sweep capping bonds; leaves the orthogonality center at site 0
/// and moves the chain norm into log_scale.
void truncate(BoundaryChain &chain);

/// Exact contraction of the chain against the final column `col`.
GridValue close_chain(const BoundaryChain &chain, const GridNetwork &net, std::size_t col);

/// Chain after absorbing columns 0..last_col.
BoundaryChain sweep_columns(const GridNetwork &net, std::size_t last_col, std::size_t max_bond, double tol);

/// Approximate scalar value of the whole network by boundary-MPS sweeping left to right.
GridValue contract_grid(const GridNetwork &net, std::size_t max_bond, double tol = 1e-14);

/// Exact value by contracting cells one at a time (exponential memory; tests only).
cplx contract_grid_dense(const GridNetwork &net);

}  // namespace tnqec

#endif
