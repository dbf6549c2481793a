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

#include "tnqec/grid.h"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "tnqec/errors.h"

namespace tnqec {

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Eigen::Index;

const char *const kLegs[] = {"up", "down", "left", "right"};

Tensor from_matrix(std::vector<std::string> labels, std::vector<std::size_t> shape, const RowMat &m) {
    return Tensor(std::move(labels), std::move(shape), std::vector<cplx>(m.data(), m.data() + m.size()));
}

// Site viewed as a matrix with rows (l, p) and columns r.
RowMat as_rows_lp(const Tensor &site) {
    Tensor t = site.permuted({"l", "p", "r"});
    Index rows = Index(t.dim("l") * t.dim("p"));
    return Eigen::Map<const RowMat>(t.data().data(), rows, Index(t.dim("r")));
}

// Site viewed as a matrix with rows l and columns (p, r).
RowMat as_rows_l(const Tensor &site) {
    Tensor t = site.permuted({"l", "p", "r"});
    return Eigen::Map<const RowMat>(t.data().data(), Index(t.dim("l")), Index(t.dim("p") * t.dim("r")));
}

// Multiplies `m` (new_l x old_l) into the l leg of `site`.
Tensor apply_left(const RowMat &m, const Tensor &site) {
    std::size_t p = site.dim("p"), r = site.dim("r");
    RowMat rest = as_rows_l(site);
    RowMat out = m * rest;
    return from_matrix({"l", "p", "r"}, {std::size_t(m.rows()), p, r}, out);
}

// Multiplies `m` (old_r x new_r) into the r leg of `site`.
Tensor apply_right(const Tensor &site, const RowMat &m) {
    std::size_t l = site.dim("l"), p = site.dim("p");
    RowMat lp = as_rows_lp(site);
    RowMat out = lp * m;
    return from_matrix({"l", "p", "r"}, {l, p, std::size_t(m.cols())}, out);
}

}  // namespace

GridNetwork::GridNetwork(std::size_t rows, std::size_t cols) : rows(rows), cols(cols), cells(rows * cols) {
}

void GridNetwork::validate() const {
    if (rows == 0 || cols == 0 || cells.size() != rows * cols) {
        throw StructuralError("grid must be nonempty with rows*cols cells");
    }
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const Tensor &t = at(r, c);
            if (t.rank() != 4) {
                throw StructuralError("grid cell must have exactly four legs");
            }
            for (const char *leg : kLegs) {
                if (!t.has_label(leg)) {
                    throw StructuralError(std::string("grid cell missing leg ") + leg);
                }
            }
            auto where = "cell (" + std::to_string(r) + "," + std::to_string(c) + ")";
            if ((r == 0 && t.dim("up") != 1) || (r + 1 == rows && t.dim("down") != 1) ||
                (c == 0 && t.dim("left") != 1) || (c + 1 == cols && t.dim("right") != 1)) {
                throw StructuralError(where + " has a nontrivial boundary leg");
            }
            if (r + 1 < rows && t.dim("down") != at(r + 1, c).dim("up")) {
                throw StructuralError(where + " vertical bond mismatch");
            }
            if (c + 1 < cols && t.dim("right") != at(r, c + 1).dim("left")) {
                throw StructuralError(where + " horizontal bond mismatch");
            }
        }
    }
}

GridNetwork GridNetwork::transposed() const {
    GridNetwork out(cols, rows);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            Tensor t = at(r, c)
                           .relabeled("up", "tmp_u")
                           .relabeled("left", "up")
                           .relabeled("tmp_u", "left")
                           .relabeled("down", "tmp_d")
                           .relabeled("right", "down")
                           .relabeled("tmp_d", "right");
            out.at(c, r) = t.permuted({"up", "down", "left", "right"});
        }
    }
    return out;
}

std::size_t BoundaryChain::max_bond_dim() const {
    std::size_t m = 1;
    for (const auto &s : sites) {
        m = std::max(m, s.dim("r"));
    }
    return m;
}

cplx GridValue::value() const {
    if (mantissa == cplx{0}) {
        return 0;
    }
    return mantissa * std::exp(log_scale);
}

void canonicalize(BoundaryChain &chain) {
    auto &s = chain.sites;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        RowMat m = as_rows_lp(s[k]);
        Index rank = std::min(m.rows(), m.cols());
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
        RowMat q = qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), rank);
        RowMat rmat = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
        s[k] = from_matrix({"l", "p", "r"}, {s[k].dim("l"), s[k].dim("p"), std::size_t(rank)}, q);
        s[k + 1] = apply_left(rmat, s[k + 1]);
    }
}

void truncate(BoundaryChain &chain) {
    auto &s = chain.sites;
    if (chain.zero) {
        return;
    }
    double chain_norm = s.back().norm();
    if (chain_norm == 0) {
        chain.zero = true;
        return;
    }
    for (std::size_t k = s.size(); k-- > 1;) {
        RowMat m = as_rows_l(s[k]);
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto &sv = svd.singularValues();
        std::vector<double> values(sv.data(), sv.data() + sv.size());
        std::size_t keep = truncated_rank(values, chain.max_bond, chain.tol);
        double discarded = 0;
        for (std::size_t i = keep; i < values.size(); ++i) {
            discarded += values[i] * values[i];
        }
        chain.truncation_error += std::sqrt(discarded) / chain_norm;
        Index kk = Index(keep);
        RowMat vh = svd.matrixV().leftCols(kk).adjoint();
        RowMat us = svd.matrixU().leftCols(kk) * sv.head(kk).asDiagonal();
        s[k] = from_matrix({"l", "p", "r"}, {keep, s[k].dim("p"), s[k].dim("r")}, vh);
        s[k - 1] = apply_right(s[k - 1], us);
    }
    double n = s.front().norm();
    if (n == 0) {
        chain.zero = true;
        return;
    }
    s.front() *= cplx{1.0 / n};
    chain.log_scale += std::log(n);
}

BoundaryChain start_chain(const GridNetwork &net, std::size_t col, std::size_t max_bond, double tol) {
    if (max_bond == 0) {
        throw SplitError("max_bond must be positive");
    }
    BoundaryChain chain;
    chain.max_bond = max_bond;
    chain.tol = tol;
    for (std::size_t r = 0; r < net.rows; ++r) {
        const Tensor &cell = net.at(r, col);
        Tensor site = cell.permuted({"up", "right", "down", "left"});
        site = Tensor({"l", "p", "r"}, {cell.dim("up"), cell.dim("right"), cell.dim("down")},
                      std::move(site.data()));
        chain.sites.push_back(std::move(site));
    }
    canonicalize(chain);
    truncate(chain);
    return chain;
}

void absorb_column(BoundaryChain &chain, const GridNetwork &net, std::size_t col) {
    for (std::size_t r = 0; r < net.rows; ++r) {
        Tensor merged = contract(chain.sites[r].relabeled("p", "left"), net.at(r, col));
        merged = merged.permuted({"l", "up", "right", "r", "down"});
        std::size_t l = merged.dim("l") * merged.dim("up");
        std::size_t p = merged.dim("right");
        std::size_t rr = merged.dim("r") * merged.dim("down");
        chain.sites[r] = Tensor({"l", "p", "r"}, {l, p, rr}, std::move(merged.data()));
    }
    canonicalize(chain);
    truncate(chain);
}

GridValue close_chain(const BoundaryChain &chain, const GridNetwork &net, std::size_t col) {
    GridValue out;
    out.log_scale = chain.log_scale;
    out.truncation_error = chain.truncation_error;
    if (chain.zero) {
        return out;
    }
    // Running row vector over the combined (chain bond, column bond) index.
    RowMat env = RowMat::Ones(1, 1);
    for (std::size_t r = 0; r < net.rows; ++r) {
        Tensor merged = contract(chain.sites[r].relabeled("p", "left"), net.at(r, col));
        merged = merged.permuted({"l", "up", "r", "down", "right"});
        Index rows = Index(merged.dim("l") * merged.dim("up"));
        Index cols = Index(merged.dim("r") * merged.dim("down") * merged.dim("right"));
        Eigen::Map<const RowMat> m(merged.data().data(), rows, cols);
        env = env * m;
    }
    if (env.size() != 1) {
        throw StructuralError("closing column left open legs");
    }
    out.mantissa = env(0, 0);
    return out;
}

BoundaryChain sweep_columns(const GridNetwork &net, std::size_t last_col, std::size_t max_bond, double tol) {
    BoundaryChain chain = start_chain(net, 0, max_bond, tol);
    for (std::size_t c = 1; c <= last_col; ++c) {
        absorb_column(chain, net, c);
    }
    return chain;
}

GridValue contract_grid(const GridNetwork &net, std::size_t max_bond, double tol) {
    net.validate();
    if (net.cols == 1) {
        BoundaryChain trivial;
        trivial.max_bond = max_bond;
        trivial.tol = tol;
        for (std::size_t r = 0; r < net.rows; ++r) {
            trivial.sites.push_back(Tensor({"l", "p", "r"}, {1, 1, 1}, {cplx{1}}));
        }
        return close_chain(trivial, net, 0);
    }
    BoundaryChain chain = sweep_columns(net, net.cols - 2, max_bond, tol);
    return close_chain(chain, net, net.cols - 1);
}

cplx contract_grid_dense(const GridNetwork &net) {
    net.validate();
    Tensor acc = Tensor::scalar(1);
    for (std::size_t r = 0; r < net.rows; ++r) {
        for (std::size_t c = 0; c < net.cols; ++c) {
            auto tag = [](const char *kind, std::size_t a, std::size_t b) {
                return std::string(kind) + std::to_string(a) + "_" + std::to_string(b);
            };
            Tensor cell = net.at(r, c)
                              .relabeled("up", tag("v", r == 0 ? net.rows : r - 1, c))
                              .relabeled("down", tag("v", r, c))
                              .relabeled("left", tag("h", r, c == 0 ? net.cols : c - 1))
                              .relabeled("right", tag("h", r, c));
            acc = contract(acc, cell);
        }
    }
    Tensor flat = acc;
    if (flat.size() != 1) {
        throw StructuralError("dense grid contraction left open legs");
    }
    return flat.data()[0];
}

}  // namespace tnqec
