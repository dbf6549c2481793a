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

#ifndef TNQEC_TN_DECODER_H
#define TNQEC_TN_DECODER_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "tnqec/channels.h"
#include "tnqec/grid.h"
#include "tnqec/lattice.h"
#include "tnqec/noise_models.h"

namespace tnqec {

struct DecoderConfig {
    /// Boundary bond cap; kUnboundedBond contracts exactly.
    std::size_t chi = 8;
    Norm norm = Norm::Diamond;
    /// Relative singular-value cutoff. The default keeps every nonzero value: directions
    /// far below the chain norm can carry all of the weight of an unlikely syndrome.
    double tol = 0;
    /// A syndrome whose probability falls below this fraction of the unconditioned
    /// trace tr[N(Pi_C)] / 2 counts as impossible; rounding leaves values near 1e-17
    /// for structurally impossible syndromes. Only meaningful when the network is the
    /// sampling distribution itself (not for the J2 = 0 bit-flip factors). 0 disables it.
    double zero_floor = 0;
    DiamondOptions diamond;

    /// Throws DomainError for chi == 0, a negative tolerance or a negative zero floor.
    void validate() const;
};

/// Network for tr[L_i R P_s N(L_j Pi_C) P_s R] on a lattice.
///
/// Pi_C and P_s are expanded over products of check operators, one binary variable per
/// face for each. Every site tensor turns the adjacent face variables into the local
/// Pauli X^u Z^v (X Z = -i Y), applies the noise PTM between the input and output
/// Paulis and closes the physical index with the trace. Face variables are owned by the
/// face's upper-left site, which passes them right and down; the lower-right site
/// receives them from its left neighbor. A horizontal bond thus carries the faces above
/// and below it, a vertical bond the face to its right (and the left boundary face in
/// column 0).
///
/// When every noise site is diagonal in the Pauli basis only matching input and output
/// variables contribute, so each face carries one bit instead of two and only the
/// diagonal entries C_ii are computed.
///
/// A Pauli-diagonal network projected onto a full syndrome by with_syndrome() is
/// contracted in the probability domain instead: grid(L, L) is the coset sum
/// sum_b p(r L S(b)) over stabilizer generator choices b, with every entry nonnegative
/// and no syndrome signs, and logical_choi() converts the four coset masses back to
/// C_ii. The signed sum loses all relative precision once the cut between contracted
/// and open columns crosses many flipped checks; the coset sum does not.
class CodeNetwork {
   public:
    /// Throws StructuralError if the noise geometry does not match the lattice.
    CodeNetwork(const Lattice &lat, const NoiseNetworkFactor &noise);

    /// Projects onto syndrome s and conjugates by the recovery r. Throws
    /// PreconditionError unless syndrome_of(r) == s.
    CodeNetwork with_syndrome(const Syndrome &s, const PauliFrame &r) const;
    /// Projects face k onto outcomes[k] (+1 or -1); 0 leaves the face unmeasured.
    CodeNetwork with_outcomes(const std::vector<int> &outcomes) const;

    const Lattice &lattice() const {
        return lat_;
    }
    bool pauli_diagonal() const {
        return pauli_;
    }
    std::size_t face_dim() const {
        return pauli_ ? 2 : 4;
    }
    /// True when grid(L, L) holds probability-domain coset sums.
    bool coset_sums() const {
        return coset_;
    }
    /// Scale exp(coset_log_scale()) multiplying every coset sum.
    double coset_log_scale() const {
        return noise_log_scale_;
    }
    /// Scale exp(log_scale()) multiplying every grid value.
    double log_scale() const;

    /// Column-mirrored grid for C(out, in): grid column g holds lattice column
    /// width - 1 - g, so the Z-bar column is absorbed last.
    GridNetwork grid(Logical out, Logical in) const;
    /// Rewrites grid column g of a grid from grid() for another logical pair.
    void fill_column(GridNetwork &grid, std::size_t g, Logical out, Logical in) const;

    /// log(tr[N(Pi_C)] / 2) with every face unmeasured, contracted under cfg. Cached per
    /// (chi, tol) and shared by every network derived from this one.
    double log_unconditioned_probability(const DecoderConfig &cfg) const;

   private:
    struct TraceCache {
        std::mutex mu;
        std::map<std::pair<std::size_t, double>, double> values;
    };

    struct SiteInfo {
        std::vector<std::size_t> faces;
        std::vector<bool> owned;
        std::vector<bool> x_type;
        // Local face positions carried by each physical bond: right, left, down, up.
        std::vector<std::size_t> bond[4];
    };

    Tensor cell(std::size_t q, Logical out, Logical in) const;
    Tensor coset_cell(std::size_t q, Pauli logical, Tensor cell, const std::array<std::size_t, 4> &leg) const;

    Lattice lat_;
    std::vector<Tensor> noise_sites_;
    double noise_log_scale_ = 0;
    bool pauli_ = false;
    bool coset_ = false;
    // Per-site error probabilities p(E) on the diagonal (out = in = E); Pauli noise only.
    std::shared_ptr<const std::vector<Tensor>> coset_sites_;
    std::vector<SiteInfo> info_;
    std::vector<int> outcomes_;
    PauliFrame recovery_;
    std::shared_ptr<TraceCache> trace_cache_ = std::make_shared<TraceCache>();
};

struct ChoiDiagnostics {
    /// Largest accumulated truncation error among the contractions.
    double truncation_error = 0;
    std::size_t contractions = 0;
    std::size_t max_bond = 0;
};

/// C_ij for all logical pairs, sharing boundary sweeps between pairs that differ only
/// on the last column. Off-diagonal entries stay zero for Pauli-diagonal noise.
LogicalChoi logical_choi(const CodeNetwork &net, const DecoderConfig &cfg, ChoiDiagnostics *diag = nullptr);

/// Same values from sixteen independent full contractions.
LogicalChoi logical_choi_reference(const CodeNetwork &net, const DecoderConfig &cfg,
                                   ChoiDiagnostics *diag = nullptr);

struct DecodeResult {
    Logical correction = Logical::I;
    LogicalChoi choi;
    QubitChannel channel;
    PauliFrame recovery;
    /// log p(s) from C_II / 2.
    double log_probability = 0;
    double truncation_error = 0;
    double wall_seconds = 0;
};

/// Throws ZeroProbabilityError when the syndrome has zero weight under the network, or
/// weight below cfg.zero_floor relative to the unconditioned trace.
DecodeResult decode(const Syndrome &s, const CodeNetwork &base, const DecoderConfig &cfg);
DecodeResult decode(const Syndrome &s, const NoiseNetworkFactor &noise, const Lattice &lat,
                    const DecoderConfig &cfg);

/// log p of a partial syndrome (outcomes as in CodeNetwork::with_outcomes); -inf when zero.
double outcome_log_probability(const CodeNetwork &base, const std::vector<int> &outcomes, const DecoderConfig &cfg);

/// Chain-rule syndrome sampler: checks are drawn in face order from conditionals
/// computed by contracting the network with the remaining faces unmeasured. Marginals
/// are memoized per prefix; sampling is safe to call concurrently.
class TnSyndromeSampler {
   public:
    TnSyndromeSampler(const Lattice &lat, const NoiseNetworkFactor &noise, const DecoderConfig &cfg);

    Syndrome sample(std::mt19937_64 &rng);
    /// Probability of a complete syndrome.
    double probability(const Syndrome &s);

   private:
    double prefix_probability(const std::string &prefix);

    CodeNetwork base_;
    DecoderConfig cfg_;
    std::mutex mu_;
    std::map<std::string, double> memo_;
};

}  // namespace tnqec

#endif
