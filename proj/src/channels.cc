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

#include "tnqec/channels.h"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <random>

#include "tnqec/errors.h"

namespace tnqec {

namespace {

using C = std::complex<double>;

Mat4 kron(const Mat2 &a, const Mat2 &b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return out;
}

const std::array<std::array<Mat4, 4>, 4> &choi_basis() {
    static const auto basis = [] {
        std::array<std::array<Mat4, 4>, 4> b;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                b[i][j] = 0.25 * kron(pauli_matrix(Pauli(i)), pauli_matrix(Pauli(j)).transpose());
            }
        }
        return b;
    }();
    return basis;
}

Mat4 choi_of(const Ptm &m) {
    Mat4 j = Mat4::Zero();
    const auto &basis = choi_basis();
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            if (m(a, b) != 0) {
                j += m(a, b) * basis[a][b];
            }
        }
    }
    return j;
}

double objective_from_choi(const Mat4 &delta_choi, const Eigen::Vector4cd &psi) {
    // psi = sum M[a][b] |a>|b>; ((E - id) x id)(psi psi^dag) = (I x B) J (I x B)^dag, B = sqrt(2) M^T.
    Mat2 b;
    b << psi(0), psi(2), psi(1), psi(3);
    b *= std::sqrt(2.0);
    Mat4 k = kron(Mat2::Identity(), b);
    Mat4 out = k * delta_choi * k.adjoint();
    return trace_norm(out);
}

// The objective depends on psi only through the reduced input state sigma, since a
// unitary on the ancilla leaves the output trace norm unchanged. The search runs over
// the Bloch ball, r = x tanh|x| / |x|, with psi = (sqrt(sigma) x I) |Phi> sqrt(2).
Eigen::Vector4cd state_from_params(const double *x) {
    double len = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    double f = len > 0 ? std::tanh(len) / len : 1;
    Mat2 sigma = Mat2::Identity() / 2.0;
    for (int k = 0; k < 3; ++k) {
        sigma += f * x[k] / 2 * pauli_matrix(Pauli(k + 1));
    }
    Eigen::SelfAdjointEigenSolver<Mat2> es(sigma);
    Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Mat2 root = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::Vector4cd psi(root(0, 0), root(1, 0), root(0, 1), root(1, 1));
    return psi / psi.norm();
}

struct NmContext {
    const Mat4 *delta_choi;
};

double nm_callback(const gsl_vector *v, void *params) {
    auto *ctx = static_cast<NmContext *>(params);
    double x[3];
    for (int k = 0; k < 3; ++k) {
        x[k] = gsl_vector_get(v, std::size_t(k));
    }
    return -objective_from_choi(*ctx->delta_choi, state_from_params(x));
}

struct MinimizerDeleter {
    void operator()(gsl_multimin_fminimizer *m) const {
        gsl_multimin_fminimizer_free(m);
    }
};
struct VectorDeleter {
    void operator()(gsl_vector *v) const {
        gsl_vector_free(v);
    }
};

double nelder_mead(const Mat4 &delta_choi, const std::array<double, 3> &start) {
    NmContext ctx{&delta_choi};
    gsl_multimin_function fn{&nm_callback, 3, &ctx};
    std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(3));
    std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(3));
    for (std::size_t k = 0; k < 3; ++k) {
        gsl_vector_set(x.get(), k, start[k]);
    }
    gsl_vector_set_all(step.get(), 0.3);
    std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> s(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3));
    gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get());
    for (int iter = 0; iter < 20000; ++iter) {
        if (gsl_multimin_fminimizer_iterate(s.get()) != 0) {
            break;
        }
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), 1e-7) == GSL_SUCCESS) {
            break;
        }
    }
    return -gsl_multimin_fminimizer_minimum(s.get());
}

Eigen::Vector4cd random_pure_state(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Eigen::Vector4cd psi;
    for (int k = 0; k < 4; ++k) {
        psi(k) = C{g(rng), g(rng)};
    }
    return psi / psi.norm();
}

std::array<double, 3> params_from_state(const Eigen::Vector4cd &psi) {
    Mat2 b;
    b << psi(0), psi(2), psi(1), psi(3);
    Mat2 sigma = b.adjoint() * b;
    sigma /= sigma.trace();
    std::array<double, 3> r{};
    double len = 0;
    for (int k = 0; k < 3; ++k) {
        r[std::size_t(k)] = (sigma * pauli_matrix(Pauli(k + 1))).trace().real();
        len += r[std::size_t(k)] * r[std::size_t(k)];
    }
    len = std::sqrt(len);
    if (len > 0) {
        double f = std::atanh(std::min(len, 1 - 1e-12)) / len;
        for (auto &v : r) {
            v *= f;
        }
    }
    return r;
}

bool is_pauli_diagonal(const Ptm &m) {
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i != j && m(i, j) != 0) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

const Mat2 &pauli_matrix(Pauli p) {
    static const std::array<Mat2, 4> mats = [] {
        std::array<Mat2, 4> m;
        m[0] << 1, 0, 0, 1;
        m[1] << 0, 1, 1, 0;
        m[2] << 0, C{0, -1}, C{0, 1}, 0;
        m[3] << 1, 0, 0, -1;
        return m;
    }();
    return mats[static_cast<std::size_t>(p)];
}

KrausChannel KrausChannel::identity() {
    return {{Mat2::Identity()}};
}

KrausChannel KrausChannel::unitary(const Mat2 &u) {
    return {{u}};
}

void KrausChannel::validate(double tol) const {
    if (ops.empty()) {
        throw ValidationError("Kraus channel has no operators");
    }
    Mat2 sum = Mat2::Zero();
    for (const auto &k : ops) {
        sum += k.adjoint() * k;
    }
    double dev = (sum - Mat2::Identity()).cwiseAbs().maxCoeff();
    if (!(dev <= tol)) {
        throw ValidationError("Kraus operators are not trace preserving (deviation " + std::to_string(dev) + ")");
    }
}

KrausChannel KrausChannel::compose(const KrausChannel &second, const KrausChannel &first) {
    KrausChannel out;
    for (const auto &a : second.ops) {
        for (const auto &b : first.ops) {
            out.ops.push_back(a * b);
        }
    }
    return out;
}

QubitChannel QubitChannel::pauli_conjugation(Pauli p) {
    Ptm m = Ptm::Identity();
    for (int i = 1; i < 4; ++i) {
        if (anticommute(p, Pauli(i))) {
            m(i, i) = -1;
        }
    }
    return QubitChannel(m);
}

QubitChannel QubitChannel::pauli_channel(const Eigen::Vector4d &probabilities) {
    Ptm m = Ptm::Zero();
    for (int l = 0; l < 4; ++l) {
        m += probabilities(l) * pauli_conjugation(Pauli(l)).ptm();
    }
    return QubitChannel(m);
}

Mat4 QubitChannel::choi() const {
    return choi_of(ptm_);
}

QubitChannel LogicalChoi::normalized() const {
    C n = norm_factor();
    if (n == C{0}) {
        throw ZeroProbabilityError("logical Choi matrix has zero normalization (impossible syndrome)");
    }
    Ptm m;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            m(i, j) = (c(i, j) / n).real();
        }
    }
    return QubitChannel(m);
}

double LogicalChoi::max_imag_residual() const {
    C n = norm_factor();
    if (n == C{0}) {
        return 0;
    }
    double worst = 0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            worst = std::max(worst, std::abs((c(i, j) / n).imag()));
        }
    }
    return worst;
}

QubitChannel ptm_from_kraus(const KrausChannel &k) {
    k.validate();
    Ptm m;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            Mat2 out = Mat2::Zero();
            for (const auto &op : k.ops) {
                out += op * pauli_matrix(Pauli(j)) * op.adjoint();
            }
            m(i, j) = 0.5 * (pauli_matrix(Pauli(i)) * out).trace().real();
        }
    }
    return QubitChannel(m);
}

double trace_norm(const Mat4 &hermitian) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(hermitian, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance_from_identity(const QubitChannel &e) {
    return 0.5 * trace_norm(e.choi() - QubitChannel::identity().choi());
}

double diamond_objective(const QubitChannel &e, const Eigen::Vector4cd &psi) {
    return objective_from_choi(e.choi() - QubitChannel::identity().choi(), psi);
}

double diamond_distance_from_identity(const QubitChannel &e, const DiamondOptions &opts) {
    const Mat4 delta = e.choi() - QubitChannel::identity().choi();
    if (opts.pauli_closed_form && is_pauli_diagonal(e.ptm())) {
        // Pauli-covariant difference: the maximally entangled input is optimal.
        return trace_norm(delta);
    }
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> g;

    const Eigen::Vector4cd max_entangled = Eigen::Vector4cd(1, 0, 0, 1) / std::sqrt(2.0);
    double best = objective_from_choi(delta, max_entangled);
    std::vector<double> found;
    std::array<double, 3> start = params_from_state(max_entangled);

    for (int restart = 0; restart < opts.max_restarts; ++restart) {
        double value = nelder_mead(delta, start);
        found.push_back(value);
        best = std::max(best, value);
        for (auto &x : start) {
            x = g(rng);
        }
        if (restart + 1 < opts.restarts) {
            continue;
        }
        auto agreeing = std::count_if(found.begin(), found.end(),
                                      [&](double v) { return v >= best - opts.agreement; });
        if (agreeing < 2) {
            continue;
        }
        // Certification: no random pure state may beat the optimum.
        std::mt19937_64 cert_rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
        bool certified = true;
        for (int k = 0; k < opts.certification_samples; ++k) {
            Eigen::Vector4cd psi = random_pure_state(cert_rng);
            if (objective_from_choi(delta, psi) > best + 1e-12) {
                start = params_from_state(psi);
                certified = false;
                break;
            }
        }
        if (certified) {
            return best;
        }
    }
    throw ConvergenceError("diamond-norm maximization did not certify", best);
}

double correction_error(const QubitChannel &e, Pauli l, Norm norm, const DiamondOptions &opts) {
    QubitChannel corrected = QubitChannel::compose(QubitChannel::pauli_conjugation(l), e);
    return norm == Norm::Trace ? trace_distance_from_identity(corrected)
                               : diamond_distance_from_identity(corrected, opts);
}

Logical select_correction(const QubitChannel &e, Norm norm, const DiamondOptions &opts) {
    std::array<double, 4> err{};
    for (int l = 0; l < 4; ++l) {
        err[std::size_t(l)] = correction_error(e, Pauli(l), norm, opts);
    }
    double lowest = *std::min_element(err.begin(), err.end());
    for (int l = 0; l < 4; ++l) {
        if (err[std::size_t(l)] <= lowest + 1e-9) {
            return Pauli(l);
        }
    }
    return Pauli::I;
}

Logical select_correction(const LogicalChoi &lc, Norm norm, const DiamondOptions &opts) {
    return select_correction(lc.normalized(), norm, opts);
}

}  // namespace tnqec
