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

#include "tnqec/noise_models.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "tnqec/errors.h"
#include "tnqec/grid.h"

using namespace tnqec;

namespace {

IsingParams default_params(double beta = 1) {
    IsingParams p;
    p.beta = beta;
    return p;
}

// Direct evaluation of the Ising energy from the lattice geometry.
double naive_energy(const SpinConfig &s, const IsingParams &p, const Lattice &lat) {
    double e = 0;
    for (auto v : s) {
        e -= p.h * v;
    }
    for (auto [a, b] : lat.edges()) {
        e -= p.j1 * s[a] * s[b];
    }
    for (std::size_t k = 0; k < lat.num_z_faces(); ++k) {
        double prod = 1;
        for (auto q : lat.z_face(k).sites) {
            prod *= s[q];
        }
        e -= p.j2 * prod;
    }
    return e;
}

SpinConfig config(std::uint64_t index, std::size_t n) {
    SpinConfig s(n);
    for (std::size_t q = 0; q < n; ++q) {
        s[q] = (index >> q) & 1 ? -1 : 1;
    }
    return s;
}

std::vector<double> naive_distribution(const IsingParams &p, const Lattice &lat) {
    const std::size_t n = lat.num_qubits();
    std::vector<double> w(std::size_t(1) << n);
    double z = 0;
    for (std::uint64_t k = 0; k < w.size(); ++k) {
        w[k] = std::exp(-p.beta * naive_energy(config(k, n), p, lat));
        z += w[k];
    }
    for (auto &v : w) {
        v /= z;
    }
    return w;
}

// Contraction of the noise network with every site fixed to (out, in).
cplx network_entry(const NoiseNetworkFactor &f, const std::vector<int> &out, const std::vector<int> &in) {
    GridNetwork net(f.rows, f.cols);
    for (std::size_t q = 0; q < f.sites.size(); ++q) {
        Tensor o({"out"}, {4});
        o.at({std::size_t(out[q])}) = 1;
        Tensor i({"in"}, {4});
        i.at({std::size_t(in[q])}) = 1;
        net.cells[q] = contract(contract(f.sites[q], o), i).permuted({"up", "down", "left", "right"});
    }
    return contract_grid_dense(net) * std::exp(f.log_scale);
}

std::size_t syndrome_weight(const SpinConfig &s, const Lattice &lat) {
    return syndrome_of(frame_from_spins(s), lat).num_flipped();
}

}  // namespace

TEST(amplitude_damping, limits) {
    KrausChannel k0 = amplitude_damping(0);
    EXPECT_TRUE(k0.ops[0].isApprox(Mat2::Identity()));
    EXPECT_EQ(k0.ops[1].norm(), 0.0);

    KrausChannel k1 = amplitude_damping(1);
    Mat2 one = Mat2::Zero();
    one(1, 1) = 1;
    Mat2 out = Mat2::Zero();
    for (const auto &k : k1.ops) {
        out += k * one * k.adjoint();
    }
    Mat2 zero = Mat2::Zero();
    zero(0, 0) = 1;
    EXPECT_TRUE(out.isApprox(zero, 1e-15));

    amplitude_damping(0.39).validate();
    EXPECT_THROW(amplitude_damping(-0.01), DomainError);
    EXPECT_THROW(amplitude_damping(1.01), DomainError);
}

TEST(cbf_energy, ordered_state_counts) {
    Lattice lat = Lattice::build(3, 3);
    IsingParams p = default_params();
    EXPECT_NEAR(cbf_energy(SpinConfig(9, 1), p, lat), -9 * p.h - 12 * p.j1 - 4 * p.j2, 1e-12);
    IsingParams zero{1, 0, 0, 0};
    EXPECT_EQ(cbf_energy(config(0x155, 9), zero, lat), 0.0);
}

TEST(cbf_energy, bulk_flip_delta) {
    Lattice lat = Lattice::build(3, 3);
    IsingParams p = default_params();
    SpinConfig s(9, 1);
    double before = cbf_energy(s, p, lat);
    s[lat.site(1, 1)] = -1;
    double after = cbf_energy(s, p, lat);
    EXPECT_NEAR(after - before, 2 * 0.01 + 2 * 4 * 1 + 2 * 2 * (-1.5), 1e-12);
}

TEST(cbf_energy, matches_naive_and_sampler_delta) {
    Lattice lat = Lattice::build(4, 3);
    IsingParams p{0.7, 0.3, 1.1, -0.4};
    CbfSampler sampler(p, lat);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        SpinConfig s = config(rng(), 12);
        EXPECT_NEAR(cbf_energy(s, p, lat), naive_energy(s, p, lat), 1e-12);
        for (std::size_t q = 0; q < 12; ++q) {
            SpinConfig t = s;
            t[q] = -t[q];
            EXPECT_NEAR(sampler.delta_energy(s, q), naive_energy(t, p, lat) - naive_energy(s, p, lat), 1e-12);
        }
    }
    EXPECT_THROW(cbf_energy(SpinConfig(5, 1), p, lat), DomainError);
}

TEST(cbf_exact_distribution, matches_independent_summation) {
    Lattice lat = Lattice::build(3, 3);
    for (double beta : {0.0, 0.8, 1.0, 1.4}) {
        IsingParams p = default_params(beta);
        CbfDistribution d = cbf_exact_distribution(p, lat);
        std::vector<double> ref = naive_distribution(p, lat);
        double total = 0, gap = 0;
        for (std::size_t k = 0; k < ref.size(); ++k) {
            total += d.probabilities[k];
            gap = std::max(gap, std::abs(d.probabilities[k] - ref[k]));
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_LT(gap, 1e-14);
        if (beta == 0) {
            EXPECT_NEAR(d.probabilities[123], 1.0 / 512, 1e-15);
        }
    }
}

TEST(cbf_exact_distribution, strong_field_product_form) {
    Lattice lat = Lattice::build(3, 3);
    for (double h : {3.0, 4.0}) {
        IsingParams p{1, h, 0, 0};
        CbfDistribution d = cbf_exact_distribution(p, lat);
        double single = std::exp(h) / (std::exp(h) + std::exp(-h));
        EXPECT_NEAR(d.probabilities[0], std::pow(single, 9), 1e-12);
    }
    EXPECT_GT(cbf_exact_distribution(IsingParams{1, 4.0, 0, 0}, lat).probabilities[0], 0.99);
}

TEST(cbf_exact_distribution, capacity) {
    EXPECT_THROW(cbf_exact_distribution(default_params(), Lattice::build(5, 5)), CapacityError);
}

TEST(ising_params, validation) {
    EXPECT_THROW((IsingParams{-1, 0, 0, 0}.validate()), DomainError);
    EXPECT_THROW((IsingParams{1, NAN, 0, 0}.validate()), DomainError);
}

TEST(cbf_mcmc, infinite_temperature_marginals_uniform) {
    Lattice lat = Lattice::build(3, 3);
    IsingParams p{0, 0.01, 1, -1.5};
    std::vector<int> flips(9, 0);
    const int samples = 10000;
    std::mt19937_64 rng(2);
    SpinConfig s(9, 1);
    CbfSampler sampler(p, lat);
    for (int k = 0; k < samples; ++k) {
        sampler.sweep(s, rng);
        for (std::size_t q = 0; q < 9; ++q) {
            flips[q] += s[q] < 0;
        }
    }
    // Chi-square over the 18 (site, value) cells with 9 degrees of freedom; p > 0.01 means < 21.67.
    double chi2 = 0;
    for (int f : flips) {
        double e = samples / 2.0;
        chi2 += (f - e) * (f - e) / e * 2;
    }
    EXPECT_LT(chi2, 21.67);
}

TEST(cbf_mcmc, syndrome_weights_match_enumeration) {
    Lattice lat = Lattice::build(3, 3);
    IsingParams p = default_params(1.0);
    CbfDistribution d = cbf_exact_distribution(p, lat);
    std::map<std::size_t, double> exact;
    for (std::uint64_t k = 0; k < d.probabilities.size(); ++k) {
        exact[syndrome_weight(config(k, 9), lat)] += d.probabilities[k];
    }
    const int samples = 10000;
    std::map<std::size_t, int> seen;
    for (int k = 0; k < samples; ++k) {
        seen[syndrome_weight(cbf_mcmc_sample(p, lat, 200, 1000 + k), lat)]++;
    }
    for (auto [w, prob] : exact) {
        double sigma = std::sqrt(samples * prob * (1 - prob));
        EXPECT_LE(std::abs(seen[w] - samples * prob), 3 * sigma + 1) << "weight " << w;
    }
}

TEST(cbf_mcmc, strong_field_freezes_spins) {
    Lattice lat = Lattice::build(3, 3);
    IsingParams p{1, 5, 0, 0};
    int ordered = 0;
    for (int k = 0; k < 1000; ++k) {
        SpinConfig s = cbf_mcmc_sample(p, lat, 20, k);
        ordered += s == SpinConfig(9, 1);
    }
    EXPECT_GT(ordered, 990);
}

TEST(cbf_mcmc, detailed_balance_of_single_updates) {
    Lattice lat = Lattice::build(3, 3);
    IsingParams p = default_params(0.8);
    CbfSampler sampler(p, lat);
    std::mt19937_64 rng(3);
    const int trials = 100000;
    for (std::uint64_t index : {0x000ull, 0x0a5ull, 0x1f0ull}) {
        for (std::size_t q : {0u, 4u, 7u}) {
            SpinConfig a = config(index, 9), b = a;
            b[q] = -b[q];
            int ab = 0, ba = 0;
            for (int t = 0; t < trials; ++t) {
                SpinConfig x = a, y = b;
                ab += sampler.update(x, q, rng);
                ba += sampler.update(y, q, rng);
            }
            double pa = std::exp(-p.beta * cbf_energy(a, p, lat));
            double pb = std::exp(-p.beta * cbf_energy(b, p, lat));
            double lhs = pa * ab / trials, rhs = pb * ba / trials;
            EXPECT_NEAR(lhs / rhs, 1.0, 0.05) << index << " site " << q;
        }
    }
}

TEST(cbf_mcmc, deterministic_given_seed) {
    Lattice lat = Lattice::build(5, 5);
    IsingParams p = default_params(1.1);
    EXPECT_EQ(cbf_mcmc_sample(p, lat, 30, 99), cbf_mcmc_sample(p, lat, 30, 99));
    EXPECT_THROW(cbf_mcmc_sample(p, lat, 0, 1), DomainError);
}

TEST(conditional_distribution, independent_of_j2) {
    Lattice lat = Lattice::build(3, 3);
    IsingParams with = default_params(1.0), without = default_params(1.0);
    without.j2 = 0;
    std::vector<double> a = naive_distribution(with, lat), b = naive_distribution(without, lat);
    std::map<std::uint64_t, std::pair<double, double>> mass;
    std::vector<std::uint64_t> key(a.size());
    for (std::uint64_t k = 0; k < a.size(); ++k) {
        key[k] = syndrome_of(frame_from_spins(config(k, 9)), lat).key();
        mass[key[k]].first += a[k];
        mass[key[k]].second += b[k];
    }
    double gap = 0;
    for (std::uint64_t k = 0; k < a.size(); ++k) {
        gap = std::max(gap, std::abs(a[k] / mass[key[k]].first - b[k] / mass[key[k]].second));
    }
    EXPECT_LT(gap, 1e-12);
}

TEST(cbf_network_factors, infinite_temperature_is_uniform_flip) {
    Lattice lat = Lattice::build(3, 3);
    NoiseNetworkFactor f = cbf_network_factors(IsingParams{0, 0.01, 1, -1.5}, lat);
    EXPECT_EQ(f.bond_dim, 2u);
    EXPECT_TRUE(f.pauli_diagonal());
    std::vector<int> ident(9, 0);
    cplx norm = network_entry(f, ident, ident);
    for (int pauli = 0; pauli < 4; ++pauli) {
        std::vector<int> s = ident;
        s[4] = pauli;
        double expected = pauli < 2 ? 1 : 0;
        EXPECT_NEAR(std::abs(network_entry(f, s, s) / norm - expected), 0.0, 1e-12);
    }
}

TEST(cbf_network_factors, uncoupled_sites_are_bit_flips) {
    Lattice lat = Lattice::build(3, 2);
    IsingParams p{0.9, 0.4, 0, -1.5};
    NoiseNetworkFactor f = cbf_network_factors(p, lat);
    double flip = std::exp(-p.beta * p.h) / (std::exp(p.beta * p.h) + std::exp(-p.beta * p.h));
    std::vector<int> ident(6, 0);
    cplx norm = network_entry(f, ident, ident);
    std::vector<int> z = ident;
    z[2] = 3;
    z[5] = 2;
    EXPECT_NEAR(std::abs(network_entry(f, z, z) / norm - (1 - 2 * flip) * (1 - 2 * flip)), 0.0, 1e-12);
}

TEST(cbf_network_factors, reproduce_global_ptm) {
    // The factors carry J2 = 0; the global PTM of the bit-flip mixture is diagonal with
    // entry sum_sigma p(sigma) prod_{q: P_q in {Y, Z}} sigma_q for Pauli string P.
    Lattice lat = Lattice::build(3, 3);
    IsingParams p = default_params(1.0);
    p.j2 = 0;
    NoiseNetworkFactor f = cbf_network_factors(p, lat);
    ASSERT_TRUE(f.pauli_diagonal());
    std::vector<double> dist = naive_distribution(p, lat);
    std::vector<int> ident(9, 0);
    cplx norm = network_entry(f, ident, ident);
    // The all-identity entry is the partition function.
    double z = std::exp(cbf_exact_distribution(p, lat).log_partition);
    EXPECT_NEAR(norm.real() / z, 1.0, 1e-10);
    std::mt19937_64 rng(4);
    double worst = 0;
    for (std::uint64_t mask = 0; mask < 512; ++mask) {
        double expected = 0;
        for (std::uint64_t k = 0; k < dist.size(); ++k) {
            expected += dist[k] * (__builtin_popcountll(k & mask) % 2 ? -1 : 1);
        }
        std::vector<int> s(9);
        for (std::size_t q = 0; q < 9; ++q) {
            // Random representative of the class: I or X off the mask, Y or Z on it.
            s[q] = ((mask >> q) & 1 ? 2 : 0) + int(rng() & 1);
        }
        worst = std::max(worst, std::abs(network_entry(f, s, s) / norm - expected) / std::max(std::abs(expected), 1e-3));
    }
    EXPECT_LT(worst, 1e-10);
    // Off-diagonal strings vanish.
    std::vector<int> out = ident, in = ident;
    out[3] = 1;
    EXPECT_EQ(network_entry(f, out, in), cplx(0));
}

TEST(iid_network_factors, site_ptms_and_kronecker_assembly) {
    Lattice lat = Lattice::build(2, 2);
    NoiseNetworkFactor id = iid_network_factors(KrausChannel::identity(), lat);
    EXPECT_EQ(id.bond_dim, 1u);
    EXPECT_TRUE(id.pauli_diagonal());

    Ptm m = ptm_from_kraus(amplitude_damping(0.09)).ptm();
    NoiseNetworkFactor f = iid_network_factors(amplitude_damping(0.09), lat);
    EXPECT_FALSE(f.pauli_diagonal());
    std::mt19937_64 rng(5);
    double worst = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<int> out(4), in(4);
        double expected = 1;
        for (std::size_t q = 0; q < 4; ++q) {
            out[q] = int(rng() % 4);
            in[q] = int(rng() % 4);
            expected *= m(out[q], in[q]);
        }
        worst = std::max(worst, std::abs(network_entry(f, out, in) - expected));
    }
    EXPECT_LT(worst, 1e-14);
}
