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

#ifndef TNQEC_BASELINES_H
#define TNQEC_BASELINES_H

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "tnqec/channels.h"
#include "tnqec/lattice.h"
#include "tnqec/noise_models.h"

namespace tnqec {

/// Largest number of defects of one check type the matcher accepts.
inline constexpr std::size_t kMaxMatchingDefects = 22;

struct MatchingResult {
    /// Frame implied by the matching; it reproduces the syndrome.
    PauliFrame frame;
    /// Logical class of frame * recovery_frame(s), i.e. the correction to apply after
    /// the canonical recovery.
    Logical correction = Logical::I;
};

/// Minimum-weight perfect matching of the flipped Z checks (giving X flips) and the
/// flipped X checks (giving Z flips) separately. Edge weights are shortest path lengths
/// in the graph whose vertices are the checks of one type plus a boundary vertex and
/// whose edges are the qubits. Exact bitmask dynamic programming; among equal-weight
/// matchings the lowest defect is paired with the earliest candidate in the order
/// (higher defects ascending, then the boundary).
/// Throws CapacityError for more than kMaxMatchingDefects defects of one type.
MatchingResult mwpm_match(const Syndrome &s, const Lattice &lat);
Logical mwpm_decode(const Syndrome &s, const Lattice &lat);

/// Dense reference simulator for at most 12 qubits.
///
/// Builds N(L_j Pi_C) for the four logical insertions as 2^N x 2^N matrices. Logical
/// channels and syndrome probabilities follow from dense projectors and Pauli
/// conjugations. Qubit q is bit q of the computational-basis index.
class DenseSimulator {
   public:
    static constexpr std::size_t kMaxQubits = 12;
    using Matrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    /// Independent noise, one Kraus channel per site.
    DenseSimulator(const Lattice &lat, const std::vector<KrausChannel> &per_site);
    DenseSimulator(const Lattice &lat, const KrausChannel &every_site);
    /// Correlated bit flips as the explicit mixture sum_sigma p(sigma) X^sigma . X^sigma.
    DenseSimulator(const Lattice &lat, const IsingParams &params);

    struct Result {
        LogicalChoi choi;
        /// tr[P_s N(Pi_C / 2)].
        double probability = 0;
    };

    /// Throws DomainError for malformed syndromes.
    Result logical_channel(const Syndrome &s) const;
    /// Probability of a partial syndrome (+1/-1 per measured face, 0 unmeasured).
    double outcome_probability(const std::vector<int> &outcomes) const;

    /// Chain-rule sampler over the checks in face order; conditionals memoized per prefix.
    Syndrome sample(std::mt19937_64 &rng);

    const Lattice &lattice() const {
        return lat_;
    }

   private:
    void prepare(const std::vector<KrausChannel> *kraus, const IsingParams *params);

    Lattice lat_;
    std::array<Matrix, 4> noisy_;
    std::mutex mu_;
    std::map<std::string, double> memo_;
};

/// argmin over corrections of the exact logical channel's distance from the identity.
Logical optimal_decode_dense(const Syndrome &s, const DenseSimulator &sim, Norm norm,
                             const DiamondOptions &opts = {});

/// Exhaustive coset probabilities for correlated bit flips (at most 20 qubits).
///
/// For every Z-check syndrome, the probability mass of each logical class of
/// (error frame * recovery_frame(s)) under the Boltzmann distribution.
class CbfMlTable {
   public:
    CbfMlTable(const IsingParams &p, const Lattice &lat);

    /// Mass of each class (I, X, Y, Z) for the syndrome; Y and Z are always zero.
    std::array<double, 4> class_mass(const Syndrome &s) const;
    double syndrome_probability(const Syndrome &s) const;
    /// Class of maximum mass, ties (within 1e-12 relative) resolved in the order I, X, Y, Z.
    /// Throws ZeroProbabilityError for unreachable syndromes.
    Logical decode(const Syndrome &s) const;
    /// Keys (over lattice faces) of every syndrome with nonzero probability.
    std::vector<std::uint64_t> reachable() const;
    /// p(sigma | s) for every configuration index, zero when inconsistent with s.
    std::vector<double> conditional(const Syndrome &s) const;

   private:
    Lattice lat_;
    CbfDistribution dist_;
    std::vector<std::uint64_t> syndrome_key_;
    std::vector<std::uint8_t> cls_;
    std::map<std::uint64_t, std::array<double, 4>> mass_;
};

Logical ml_decode_cbf_exact(const Syndrome &s, const IsingParams &p, const Lattice &lat);

}  // namespace tnqec

#endif
