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

#ifndef TNQEC_NOISE_MODELS_H
#define TNQEC_NOISE_MODELS_H

#include <cstdint>
#include <random>
#include <vector>

#include "tnqec/channels.h"
#include "tnqec/lattice.h"
#include "tnqec/tensor.h"

namespace tnqec {

/// Correlated bit-flip parameters: E(s) = -h sum s_i - j1 sum_<ij> s_i s_j - j2 sum_f prod_{i in f} s_i,
/// with the four-body sum over the Z-check faces (the faces whose checks see bit flips).
struct IsingParams {
    double beta = 1;
    double h = 0.01;
    double j1 = 1;
    double j2 = -1.5;

    /// Throws DomainError for negative beta or non-finite values.
    void validate() const;
};

/// One spin per site; -1 means the site carries an X flip.
using SpinConfig = std::vector<std::int8_t>;

PauliFrame frame_from_spins(const SpinConfig &sigma);

/// Amplitude damping: K0 = |0><0| + sqrt(1-gamma)|1><1|, K1 = sqrt(gamma)|0><1|.
KrausChannel amplitude_damping(double gamma);

double cbf_energy(const SpinConfig &sigma, const IsingParams &p, const Lattice &lat);

/// Boltzmann table over all 2^N configurations; index bit q set means site q flipped.
struct CbfDistribution {
    std::vector<double> probabilities;
    double log_partition = 0;

    static SpinConfig config(std::uint64_t index, std::size_t n);
};

/// Throws CapacityError above 20 qubits.
CbfDistribution cbf_exact_distribution(const IsingParams &p, const Lattice &lat);

/// Single-site Metropolis in a fixed row-major scan order.
class CbfSampler {
   public:
    CbfSampler(const IsingParams &p, const Lattice &lat);

    /// Energy change from flipping site q of sigma.
    double delta_energy(const SpinConfig &sigma, std::size_t q) const;
    void sweep(SpinConfig &sigma, std::mt19937_64 &rng) const;
    /// One attempted update at site q; returns whether it was accepted.
    bool update(SpinConfig &sigma, std::size_t q, std::mt19937_64 &rng) const;

    std::size_t num_sites() const {
        return neighbors_.size();
    }

   private:
    IsingParams p_;
    std::vector<std::vector<std::size_t>> neighbors_;
    std::vector<std::vector<std::size_t>> faces_;  // per site, indices into face_sites_
    std::vector<std::vector<std::size_t>> face_sites_;
};

/// Configuration after n_sweeps Metropolis sweeps from a uniformly random start.
SpinConfig cbf_mcmc_sample(const IsingParams &p, const Lattice &lat, std::size_t n_sweeps, std::uint64_t seed);

/// Same, starting from `start` instead of a random configuration.
SpinConfig cbf_mcmc_sample_from(SpinConfig start, const IsingParams &p, const Lattice &lat, std::size_t n_sweeps,
                                std::mt19937_64 &rng);

/// Per-site noise tensors of a two-dimensional noise network.
///
/// Site tensors carry labels "out", "in" (PTM indices, dimension 4, entry
/// [out][in] = M[out][in]) and "left", "right", "up", "down" (correlation bonds of
/// dimension bond_dim, or 1 towards the lattice edge). Contracting all bonds gives
/// exp(log_scale) times the global PTM.
struct NoiseNetworkFactor {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t bond_dim = 1;
    double log_scale = 0;
    std::vector<Tensor> sites;
    /// Optional error weights for Pauli-diagonal networks: same labels and scale as
    /// sites, with diagonal entry [E][E] the weight of Pauli error E. Decoders use
    /// them in place of inverting the Pauli spectrum, which loses small weights.
    std::vector<Tensor> error_weights;

    const Tensor &site(std::size_t r, std::size_t c) const {
        return sites[r * cols + c];
    }
    /// True when every site tensor is diagonal in (out, in), i.e. a Pauli channel.
    bool pauli_diagonal() const;
};

/// J2 = 0 factorization of the correlated bit-flip channel (J2 does not change
/// conditional probabilities given the syndrome). Unnormalized.
NoiseNetworkFactor cbf_network_factors(const IsingParams &p, const Lattice &lat);

/// Independent noise: every site carries the channel's PTM, bonds of dimension 1.
NoiseNetworkFactor iid_network_factors(const KrausChannel &k, const Lattice &lat);
NoiseNetworkFactor iid_network_factors(const QubitChannel &e, const Lattice &lat);

}  // namespace tnqec

#endif
