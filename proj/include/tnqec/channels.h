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

#ifndef TNQEC_CHANNELS_H
#define TNQEC_CHANNELS_H

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tnqec/pauli.h"

namespace tnqec {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Ptm = Eigen::Matrix4d;

/// The four Pauli matrices in I, X, Y, Z order.
const Mat2 &pauli_matrix(Pauli p);

struct KrausChannel {
    std::vector<Mat2> ops;

    static KrausChannel identity();
    static KrausChannel unitary(const Mat2 &u);
    /// Throws ValidationError unless sum K^dag K = I within `tol`.
    void validate(double tol = 1e-10) const;
    /// Kraus operators of `second` after `first`.
    static KrausChannel compose(const KrausChannel &second, const KrausChannel &first);
};

/// Single-qubit map stored as its Pauli transfer matrix M[i][j] = tr[P_i E(P_j)] / 2.
///
/// The Choi matrix is (E x id)(|Phi><Phi|) for the normalized maximally entangled
/// |Phi> = (|00> + |11>)/sqrt(2), so the identity channel's Choi matrix has trace 1:
/// J = (1/4) sum_ij M[i][j] P_i (x) P_j^T. Tracing out the output factor gives I/2.
class QubitChannel {
   public:
    QubitChannel() : ptm_(Ptm::Identity()) {
    }
    explicit QubitChannel(const Ptm &ptm) : ptm_(ptm) {
    }

    static QubitChannel identity() {
        return QubitChannel();
    }
    /// Conjugation by a Pauli: a diagonal PTM of signs.
    static QubitChannel pauli_conjugation(Pauli p);
    /// Stochastic Pauli channel with probabilities for I, X, Y, Z.
    static QubitChannel pauli_channel(const Eigen::Vector4d &probabilities);

    const Ptm &ptm() const {
        return ptm_;
    }
    Mat4 choi() const;
    /// `second` applied after `first`.
    static QubitChannel compose(const QubitChannel &second, const QubitChannel &first) {
        return QubitChannel(second.ptm_ * first.ptm_);
    }

   private:
    Ptm ptm_;
};

/// Raw values c(i, j) = tr[L_i E(L_j Pi_C)] from a decoder or oracle, possibly sharing
/// a common factor exp(log_scale).
struct LogicalChoi {
    Mat4 c = Mat4::Zero();
    double log_scale = 0;

    std::complex<double> norm_factor() const {
        return c(0, 0);
    }
    /// Throws ZeroProbabilityError when norm_factor() is zero.
    QubitChannel normalized() const;
    /// Largest imaginary part of c / c(0, 0); a sign-bookkeeping diagnostic.
    double max_imag_residual() const;
};

/// Throws ValidationError for non-trace-preserving input.
QubitChannel ptm_from_kraus(const KrausChannel &k);

/// Sum of absolute eigenvalues of a Hermitian 4x4 matrix.
double trace_norm(const Mat4 &hermitian);

/// (1/2) || J(e) - J(id) ||_1 with the trace-1 Choi normalization. X-unitary gives 1.
double trace_distance_from_identity(const QubitChannel &e);

struct DiamondOptions {
    int restarts = 3;
    int max_restarts = 24;
    int certification_samples = 1000;
    /// Two restarts within this of the best value count as converged.
    double agreement = 1e-7;
    std::uint64_t seed = 0x5eed;
    /// Exact shortcut for maps with a diagonal PTM, whose optimum is the maximally
    /// entangled input.
    bool pauli_closed_form = true;
};

/// || (e - id) (x) id ||_diamond, the max over pure two-qubit inputs of the output trace
/// norm. X-unitary gives 2.
///
/// Multi-start Nelder-Mead over the Bloch ball of the reduced input state rho, with
/// psi the purification vec(sqrt(rho)), certified against random pure states and the
/// maximally entangled input. Throws ConvergenceError (carrying the best lower bound)
/// if certification keeps failing after max_restarts.
double diamond_distance_from_identity(const QubitChannel &e, const DiamondOptions &opts = {});

/// Output trace norm ||((e - id) (x) id)(|psi><psi|)||_1 for a normalized two-qubit psi
/// (index 2*system + ancilla).
double diamond_objective(const QubitChannel &e, const Eigen::Vector4cd &psi);

enum class Norm { Trace, Diamond };

/// || L o e - id || for the logical Pauli L.
double correction_error(const QubitChannel &e, Pauli l, Norm norm, const DiamondOptions &opts = {});

/// argmin over L in {I, X, Y, Z} of || L o E - id ||, ties resolved in that order.
/// Throws ZeroProbabilityError when lc.norm_factor() == 0.
Logical select_correction(const LogicalChoi &lc, Norm norm, const DiamondOptions &opts = {});

/// Same selection from an already-normalized channel.
Logical select_correction(const QubitChannel &e, Norm norm, const DiamondOptions &opts = {});

}  // namespace tnqec

#endif
