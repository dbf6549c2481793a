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

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "tnqec/errors.h"

using namespace tnqec;

namespace {

// Positive entries keep the value away from cancellation so relative gaps are meaningful.
GridNetwork random_grid(std::size_t rows, std::size_t cols, std::size_t bond, std::uint64_t seed,
                        bool positive = true) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(positive ? 0.0 : -1.0, 1.0);
    GridNetwork net(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            std::size_t up = r == 0 ? 1 : bond, down = r + 1 == rows ? 1 : bond;
            std::size_t left = c == 0 ? 1 : bond, right = c + 1 == cols ? 1 : bond;
            Tensor t({"up", "down", "left", "right"}, {up, down, left, right});
            for (auto &v : t.data()) {
                v = {u(rng), positive ? 0.0 : u(rng)};
            }
            net.at(r, c) = std::move(t);
        }
    }
    return net;
}

double relative_gap(cplx a, cplx b) {
    return std::abs(a - b) / std::abs(b);
}

}  // namespace

TEST(grid, all_ones_two_by_two) {
    GridNetwork net(2, 2);
    for (auto &cell : net.cells) {
        cell = Tensor({"up", "down", "left", "right"}, {1, 1, 1, 1}, {1});
    }
    GridValue v = contract_grid(net, 8);
    EXPECT_NEAR(std::abs(v.value() - cplx(1)), 0.0, 1e-14);
    EXPECT_EQ(v.truncation_error, 0.0);
}

TEST(grid, exact_bond_matches_dense_contraction) {
    GridNetwork net = random_grid(3, 3, 2, 1, false);
    cplx dense = contract_grid_dense(net);
    GridValue v = contract_grid(net, 512);
    EXPECT_LT(relative_gap(v.value(), dense), 1e-10);
    EXPECT_LT(v.truncation_error, 1e-12);
}

TEST(grid, single_column_and_single_row) {
    GridNetwork col = random_grid(4, 1, 2, 2, false);
    EXPECT_LT(relative_gap(contract_grid(col, 8).value(), contract_grid_dense(col)), 1e-12);
    GridNetwork row = random_grid(1, 5, 3, 3, false);
    EXPECT_LT(relative_gap(contract_grid(row, 8).value(), contract_grid_dense(row)), 1e-12);
}

TEST(grid, bond_one_truncation_is_reported) {
    GridNetwork net = random_grid(3, 3, 2, 4, false);
    cplx exact = contract_grid(net, 512).value();
    GridValue v = contract_grid(net, 1);
    double deviation = std::abs(v.value() - exact) / std::abs(exact);
    EXPECT_GT(deviation, 1e-6);
    EXPECT_GT(v.truncation_error, 0.0);
    // Same order of magnitude or larger: the accumulated error bounds the deviation loosely.
    EXPECT_GT(v.truncation_error * 10, deviation);
}

TEST(grid, transposition_invariance) {
    GridNetwork net = random_grid(3, 4, 2, 5, false);
    cplx a = contract_grid(net, kUnboundedBond).value();
    cplx b = contract_grid(net.transposed(), kUnboundedBond).value();
    EXPECT_LT(relative_gap(a, b), 1e-10);
}

TEST(grid, deviation_shrinks_with_bond_cap) {
    GridNetwork net = random_grid(4, 4, 3, 6);
    cplx exact = contract_grid_dense(net);
    std::vector<double> deviation;
    for (std::size_t chi : {1, 2, 4, 8, 16}) {
        deviation.push_back(relative_gap(contract_grid(net, chi).value(), exact));
    }
    EXPECT_EQ(std::min_element(deviation.begin(), deviation.end()) - deviation.begin(), 4);
    EXPECT_LT(deviation.back(), 1e-10);
}

TEST(grid, zero_network_contracts_to_zero) {
    GridNetwork net = random_grid(3, 3, 2, 7);
    for (auto &v : net.at(1, 1).data()) {
        v = 0;
    }
    GridValue g = contract_grid(net, 8);
    EXPECT_EQ(g.value(), cplx(0));
}

TEST(grid, large_values_do_not_overflow) {
    GridNetwork net = random_grid(6, 60, 2, 8);
    for (auto &cell : net.cells) {
        cell *= cplx(1e8);
    }
    GridValue v = contract_grid(net, 8);
    EXPECT_TRUE(std::isfinite(v.log_scale));
    EXPECT_TRUE(std::isfinite(std::abs(v.mantissa)));
    EXPECT_GT(v.log_scale + std::log(std::abs(v.mantissa)), 360 * std::log(1e8) - 1e3);
}

TEST(grid, chain_bonds_capped_and_isometric) {
    GridNetwork net = random_grid(5, 4, 3, 9, false);
    BoundaryChain chain = sweep_columns(net, 2, 4, 1e-14);
    for (std::size_t k = 0; k + 1 < chain.sites.size(); ++k) {
        EXPECT_EQ(chain.sites[k].dim("r"), chain.sites[k + 1].dim("l"));
    }
    EXPECT_LE(chain.max_bond_dim(), 4u);

    canonicalize(chain);
    for (std::size_t k = 0; k + 1 < chain.sites.size(); ++k) {
        const Tensor &s = chain.sites[k];
        Tensor gram = contract(s.conj().relabeled("r", "r2"), s);
        std::size_t n = s.dim("r");
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                EXPECT_LT(std::abs(gram.at({a, b}) - cplx(a == b ? 1 : 0)), 1e-12);
            }
        }
    }
}

TEST(grid, malformed_grids_throw) {
    GridNetwork net = random_grid(2, 2, 2, 10);
    net.at(0, 0) = Tensor({"up", "down", "left", "right"}, {1, 3, 1, 2});
    EXPECT_THROW(contract_grid(net, 8), StructuralError);
    GridNetwork open = random_grid(2, 2, 2, 11);
    open.at(0, 0) = Tensor({"up", "down", "left", "right"}, {2, 2, 1, 2});
    EXPECT_THROW(contract_grid(open, 8), StructuralError);
    EXPECT_THROW(contract_grid(random_grid(2, 2, 2, 12), 0), SplitError);
}

TEST(grid, runtime_linear_in_cells) {
    auto best_time = [](const GridNetwork &net) {
        double best = 1e9;
        for (int rep = 0; rep < 3; ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            contract_grid(net, 8);
            best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
        return best;
    };
    double previous = best_time(random_grid(6, 16, 2, 13));
    for (std::size_t cols : {32, 64}) {
        double t = best_time(random_grid(6, cols, 2, 14));
        EXPECT_LT(t / previous, 3.0) << "cols " << cols;
        previous = t;
    }
}
