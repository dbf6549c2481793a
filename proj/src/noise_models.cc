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

#include <algorithm>
#include <cmath>

#include "tnqec/errors.h"

namespace tnqec {

namespace {

using C = std::complex<double>;

double log_sum_exp(const std::vector<double> &v) {
    double m = *std::max_element(v.begin(), v.end());
    double s = 0;
    for (double x : v) {
        s += std::exp(x - m);
    }
    return m + std::log(s);
}

// Rescales t to unit max-abs entry and returns the log of the removed factor.
double normalize_in_place(Tensor &t) {
    double m = t.max_abs();
    if (m == 0) {
        return 0;
    }
    t *= C{1.0 / m};
    return std::log(m);
}

}  // namespace

void IsingParams::validate() const {
    if (!std::isfinite(beta) || !std::isfinite(h) || !std::isfinite(j1) || !std::isfinite(j2)) {
        throw DomainError("Ising parameters must be finite");
    }
    if (beta < 0) {
        throw DomainError("inverse temperature must be non-negative");
    }
}

PauliFrame frame_from_spins(const SpinConfig &sigma) {
    PauliFrame f(sigma.size());
    for (std::size_t q = 0; q < sigma.size(); ++q) {
        f.x[q] = sigma[q] == -1;
    }
    return f;
}

KrausChannel amplitude_damping(double gamma) {
    if (!(gamma >= 0 && gamma <= 1)) {
        throw DomainError("damping parameter must lie in [0, 1]");
    }
    Mat2 k0, k1;
    k0 << 1, 0, 0, std::sqrt(1 - gamma);
    k1 << 0, std::sqrt(gamma), 0, 0;
    return {{k0, k1}};
}

double cbf_energy(const SpinConfig &sigma, const IsingParams &p, const Lattice &lat) {
    if (sigma.size() != lat.num_qubits()) {
        throw DomainError("spin configuration does not match the lattice");
    }
    double field = 0, bonds = 0, plaquettes = 0;
    for (auto s : sigma) {
        field += s;
    }
    for (auto [a, b] : lat.edges()) {
        bonds += sigma[a] * sigma[b];
    }
    for (std::size_t k = 0; k < lat.num_z_faces(); ++k) {
        int prod = 1;
        for (auto q : lat.z_face(k).sites) {
            prod *= sigma[q];
        }
        plaquettes += prod;
    }
    return -p.h * field - p.j1 * bonds - p.j2 * plaquettes;
}

SpinConfig CbfDistribution::config(std::uint64_t index, std::size_t n) {
    SpinConfig s(n);
    for (std::size_t q = 0; q < n; ++q) {
        s[q] = ((index >> q) & 1) ? -1 : 1;
    }
    return s;
}

CbfDistribution cbf_exact_distribution(const IsingParams &p, const Lattice &lat) {
    p.validate();
    const std::size_t n = lat.num_qubits();
    if (n > 20) {
        throw CapacityError("exact enumeration limited to 20 qubits");
    }
    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<double> log_w(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        log_w[i] = -p.beta * cbf_energy(CbfDistribution::config(i, n), p, lat);
    }
    CbfDistribution d;
    d.log_partition = log_sum_exp(log_w);
    d.probabilities.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        d.probabilities[i] = std::exp(log_w[i] - d.log_partition);
    }
    return d;
}

CbfSampler::CbfSampler(const IsingParams &p, const Lattice &lat) : p_(p) {
    p.validate();
    neighbors_.assign(lat.num_qubits(), {});
    for (auto [a, b] : lat.edges()) {
        neighbors_[a].push_back(b);
        neighbors_[b].push_back(a);
    }
    faces_.assign(lat.num_qubits(), {});
    for (std::size_t k = 0; k < lat.num_z_faces(); ++k) {
        face_sites_.push_back(lat.z_face(k).sites);
        for (auto q : lat.z_face(k).sites) {
            faces_[q].push_back(k);
        }
    }
}

double CbfSampler::delta_energy(const SpinConfig &sigma, std::size_t q) const {
    double s = sigma[q];
    double nb = 0;
    for (auto j : neighbors_[q]) {
        nb += sigma[j];
    }
    double plaq = 0;
    for (auto f : faces_[q]) {
        int prod = 1;
        for (auto j : face_sites_[f]) {
            prod *= sigma[j];
        }
        plaq += prod;
    }
    return 2 * p_.h * s + 2 * p_.j1 * s * nb + 2 * p_.j2 * plaq;
}

bool CbfSampler::update(SpinConfig &sigma, std::size_t q, std::mt19937_64 &rng) const {
    double de = delta_energy(sigma, q);
    bool accept = de <= 0;
    if (!accept) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        accept = u(rng) < std::exp(-p_.beta * de);
    }
    if (accept) {
        sigma[q] = std::int8_t(-sigma[q]);
    }
    return accept;
}

void CbfSampler::sweep(SpinConfig &sigma, std::mt19937_64 &rng) const {
    for (std::size_t q = 0; q < sigma.size(); ++q) {
        update(sigma, q, rng);
    }
}

SpinConfig cbf_mcmc_sample_from(SpinConfig start, const IsingParams &p, const Lattice &lat, std::size_t n_sweeps,
                                std::mt19937_64 &rng) {
    if (n_sweeps < 1) {
        throw DomainError("at least one sweep is required");
    }
    if (start.size() != lat.num_qubits()) {
        throw DomainError("start configuration does not match the lattice");
    }
    CbfSampler sampler(p, lat);
    for (std::size_t k = 0; k < n_sweeps; ++k) {
        sampler.sweep(start, rng);
    }
    return start;
}

SpinConfig cbf_mcmc_sample(const IsingParams &p, const Lattice &lat, std::size_t n_sweeps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    SpinConfig start(lat.num_qubits());
    for (auto &s : start) {
        s = coin(rng) ? -1 : 1;
    }
    return cbf_mcmc_sample_from(std::move(start), p, lat, n_sweeps, rng);
}

bool NoiseNetworkFactor::pauli_diagonal() const {
    for (const auto &t : sites) {
        Tensor p = t.permuted({"out", "in", "left", "right", "up", "down"});
        std::size_t block = p.size() / 16;
        for (std::size_t o = 0; o < 4; ++o) {
            for (std::size_t i = 0; i < 4; ++i) {
                if (o == i) {
                    continue;
                }
                for (std::size_t b = 0; b < block; ++b) {
                    if (p.data()[(o * 4 + i) * block + b] != C{0}) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

NoiseNetworkFactor cbf_network_factors(const IsingParams &p, const Lattice &lat) {
    p.validate();
    const std::size_t rows = lat.height(), cols = lat.width();
    // Symmetric square root S of W[s][s'] = exp(beta j1 s s'), S S = W (complex for j1 < 0).
    const double k = p.beta * p.j1;
    const C root_even = std::sqrt(C{std::exp(k) + std::exp(-k)});
    const C root_odd = std::sqrt(C{std::exp(k) - std::exp(-k)});
    // root_even - root_odd without cancellation: (e^k + e^-k) - (e^k - e^-k) = 2 e^-k.
    const C root_gap = 2.0 * std::exp(-k) / (root_even + root_odd);
    C s_mat[2][2] = {{0.5 * (root_even + root_odd), 0.5 * root_gap},
                     {0.5 * root_gap, 0.5 * (root_even + root_odd)}};

    NoiseNetworkFactor net;
    net.rows = rows;
    net.cols = cols;
    net.bond_dim = 2;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            std::size_t dl = c > 0 ? 2 : 1, dr = c + 1 < cols ? 2 : 1;
            std::size_t du = r > 0 ? 2 : 1, dd = r + 1 < rows ? 2 : 1;
            Tensor t({"out", "in", "left", "right", "up", "down"}, {4, 4, dl, dr, du, dd});
            Tensor e({"out", "in", "left", "right", "up", "down"}, {4, 4, dl, dr, du, dd});
            for (int spin = 0; spin < 2; ++spin) {
                const double sigma = spin == 0 ? 1.0 : -1.0;
                const double field = std::exp(p.beta * p.h * sigma);
                for (std::size_t bl = 0; bl < dl; ++bl) {
                    for (std::size_t br = 0; br < dr; ++br) {
                        for (std::size_t bu = 0; bu < du; ++bu) {
                            for (std::size_t bd = 0; bd < dd; ++bd) {
                                C w = field;
                                w *= dl == 2 ? s_mat[spin][bl] : C{1};
                                w *= dr == 2 ? s_mat[spin][br] : C{1};
                                w *= du == 2 ? s_mat[spin][bu] : C{1};
                                w *= dd == 2 ? s_mat[spin][bd] : C{1};
                                for (std::size_t pi = 0; pi < 4; ++pi) {
                                    // X conjugation negates Y and Z.
                                    double sign = (spin == 1 && (pi == 2 || pi == 3)) ? -1.0 : 1.0;
                                    t.at({pi, pi, bl, br, bu, bd}) += sign * w;
                                }
                                const std::size_t err = spin == 0 ? 0 : 1;
                                e.at({err, err, bl, br, bu, bd}) += w;
                            }
                        }
                    }
                }
            }
            const double m = t.max_abs();
            net.log_scale += normalize_in_place(t);
            if (m > 0) {
                e *= C{1.0 / m};
            }
            net.sites.push_back(std::move(t));
            net.error_weights.push_back(std::move(e));
        }
    }
    return net;
}

NoiseNetworkFactor iid_network_factors(const QubitChannel &e, const Lattice &lat) {
    NoiseNetworkFactor net;
    net.rows = lat.height();
    net.cols = lat.width();
    net.bond_dim = 1;
    Tensor t({"out", "in", "left", "right", "up", "down"}, {4, 4, 1, 1, 1, 1});
    for (std::size_t o = 0; o < 4; ++o) {
        for (std::size_t i = 0; i < 4; ++i) {
            t.at({o, i, 0, 0, 0, 0}) = e.ptm()(Eigen::Index(o), Eigen::Index(i));
        }
    }
    net.sites.assign(lat.num_qubits(), t);
    return net;
}

NoiseNetworkFactor iid_network_factors(const KrausChannel &k, const Lattice &lat) {
    return iid_network_factors(ptm_from_kraus(k), lat);
}

}  // namespace tnqec
