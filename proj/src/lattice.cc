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

#include "tnqec/lattice.h"

#include <algorithm>
#include <string>

#include "tnqec/errors.h"

namespace tnqec {

namespace {

bool is_x_plaquette(int row, int col) {
    return ((row + col) % 2 + 2) % 2 == 0;
}

void check_frame(const PauliFrame &frame, const Lattice &lat) {
    if (frame.x.size() != lat.num_qubits() || frame.z.size() != lat.num_qubits()) {
        throw DomainError("frame has " + std::to_string(frame.x.size()) + " sites, lattice has " +
                          std::to_string(lat.num_qubits()));
    }
}

void check_syndrome(const Syndrome &s, const Lattice &lat) {
    if (s.x.size() != lat.num_x_faces() || s.z.size() != lat.num_z_faces()) {
        throw DomainError("syndrome length does not match the lattice face counts");
    }
    for (auto v : s.x) {
        if (v != 1 && v != -1) {
            throw DomainError("syndrome outcomes must be +1 or -1");
        }
    }
    for (auto v : s.z) {
        if (v != 1 && v != -1) {
            throw DomainError("syndrome outcomes must be +1 or -1");
        }
    }
}

}  // namespace

Lattice Lattice::build(std::size_t width, std::size_t height) {
    if (width < 2 || height < 2) {
        throw DomainError("lattice needs width and height of at least 2");
    }
    Lattice lat;
    lat.width_ = width;
    lat.height_ = height;
    const int w = int(width), h = int(height);

    std::vector<Face> x_faces, z_faces;
    for (int fi = -1; fi <= h - 1; ++fi) {
        for (int fj = -1; fj <= w - 1; ++fj) {
            bool row_edge = fi == -1 || fi == h - 1;
            bool col_edge = fj == -1 || fj == w - 1;
            if (row_edge && col_edge) {
                continue;
            }
            bool x_type = is_x_plaquette(fi, fj);
            if (col_edge && !x_type) {
                continue;
            }
            if (row_edge && x_type) {
                continue;
            }
            Face f{x_type ? CheckType::X : CheckType::Z, fi, fj, {}};
            for (int r = fi; r <= fi + 1; ++r) {
                for (int c = fj; c <= fj + 1; ++c) {
                    if (r >= 0 && r < h && c >= 0 && c < w) {
                        f.sites.push_back(lat.site(std::size_t(r), std::size_t(c)));
                    }
                }
            }
            (x_type ? x_faces : z_faces).push_back(std::move(f));
        }
    }
    lat.num_x_ = x_faces.size();
    lat.faces_ = std::move(x_faces);
    lat.faces_.insert(lat.faces_.end(), z_faces.begin(), z_faces.end());

    lat.site_faces_.assign(lat.num_qubits(), {});
    lat.face_grid_.assign(std::size_t(w + 1) * std::size_t(h + 1), -1);
    for (std::size_t k = 0; k < lat.faces_.size(); ++k) {
        const Face &f = lat.faces_[k];
        lat.face_grid_[std::size_t(f.row + 1) * (width + 1) + std::size_t(f.col + 1)] = int(k);
        for (auto q : f.sites) {
            lat.site_faces_[q].push_back(k);
        }
    }
    for (std::size_t r = 0; r < height; ++r) {
        lat.z_logical_.push_back(lat.site(r, 0));
    }
    for (std::size_t c = 0; c < width; ++c) {
        lat.x_logical_.push_back(lat.site(height - 1, c));
    }
    return lat;
}

int Lattice::face_at(int row, int col) const {
    if (row < -1 || col < -1 || row > int(height_) - 1 || col > int(width_) - 1) {
        return -1;
    }
    return face_grid_[std::size_t(row + 1) * (width_ + 1) + std::size_t(col + 1)];
}

Pauli Lattice::logical_on_site(Logical logical, std::size_t q) const {
    bool on_z = col_of(q) == 0 && z_part(logical);
    bool on_x = row_of(q) == height_ - 1 && x_part(logical);
    return pauli_from_parts(on_x, on_z);
}

std::vector<std::pair<std::size_t, std::size_t>> Lattice::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t r = 0; r < height_; ++r) {
        for (std::size_t c = 0; c < width_; ++c) {
            if (c + 1 < width_) {
                out.emplace_back(site(r, c), site(r, c + 1));
            }
            if (r + 1 < height_) {
                out.emplace_back(site(r, c), site(r + 1, c));
            }
        }
    }
    return out;
}

nlohmann::json Lattice::to_json() const {
    nlohmann::json j;
    j["width"] = width_;
    j["height"] = height_;
    j["num_qubits"] = num_qubits();
    nlohmann::json sites = nlohmann::json::array();
    for (std::size_t q = 0; q < num_qubits(); ++q) {
        sites.push_back({{"index", q}, {"row", row_of(q)}, {"col", col_of(q)}});
    }
    j["sites"] = sites;
    auto faces_json = [&](CheckType type) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &f : faces_) {
            if (f.type == type) {
                arr.push_back({{"row", f.row}, {"col", f.col}, {"sites", f.sites}});
            }
        }
        return arr;
    };
    j["x_faces"] = faces_json(CheckType::X);
    j["z_faces"] = faces_json(CheckType::Z);
    j["z_logical_support"] = z_logical_;
    j["x_logical_support"] = x_logical_;
    return j;
}

std::size_t PauliFrame::weight() const {
    std::size_t w = 0;
    for (std::size_t q = 0; q < x.size(); ++q) {
        w += (x[q] | z[q]) != 0;
    }
    return w;
}

std::size_t PauliFrame::x_weight() const {
    return std::size_t(std::count_if(x.begin(), x.end(), [](auto v) { return v != 0; }));
}

std::size_t PauliFrame::z_weight() const {
    return std::size_t(std::count_if(z.begin(), z.end(), [](auto v) { return v != 0; }));
}

PauliFrame &PauliFrame::operator^=(const PauliFrame &other) {
    if (other.x.size() != x.size()) {
        throw DomainError("composing frames of different sizes");
    }
    for (std::size_t q = 0; q < x.size(); ++q) {
        x[q] ^= other.x[q];
        z[q] ^= other.z[q];
    }
    return *this;
}

PauliFrame operator^(PauliFrame a, const PauliFrame &b) {
    a ^= b;
    return a;
}

Syndrome Syndrome::trivial(const Lattice &lat) {
    Syndrome s;
    s.x.assign(lat.num_x_faces(), 1);
    s.z.assign(lat.num_z_faces(), 1);
    return s;
}

bool Syndrome::is_trivial() const {
    return num_flipped() == 0;
}

std::size_t Syndrome::num_flipped() const {
    std::size_t n = 0;
    for (auto v : x) {
        n += v == -1;
    }
    for (auto v : z) {
        n += v == -1;
    }
    return n;
}

void Syndrome::set_outcome(std::size_t face, int value) {
    if (face < x.size()) {
        x[face] = std::int8_t(value);
    } else {
        z[face - x.size()] = std::int8_t(value);
    }
}

std::uint64_t Syndrome::key() const {
    if (x.size() + z.size() > 64) {
        throw CapacityError("syndrome key supports at most 64 checks");
    }
    std::uint64_t k = 0;
    for (std::size_t f = 0; f < x.size() + z.size(); ++f) {
        if (outcome(f) == -1) {
            k |= std::uint64_t{1} << f;
        }
    }
    return k;
}

Syndrome Syndrome::from_key(std::uint64_t key, const Lattice &lat) {
    Syndrome s = trivial(lat);
    for (std::size_t f = 0; f < lat.num_checks(); ++f) {
        if ((key >> f) & 1) {
            s.set_outcome(f, -1);
        }
    }
    return s;
}

std::string Syndrome::bits() const {
    std::string out;
    out.reserve(x.size() + z.size());
    for (auto v : x) {
        out.push_back(v == -1 ? '1' : '0');
    }
    for (auto v : z) {
        out.push_back(v == -1 ? '1' : '0');
    }
    return out;
}

Syndrome syndrome_of(const PauliFrame &frame, const Lattice &lat) {
    check_frame(frame, lat);
    Syndrome s = Syndrome::trivial(lat);
    for (std::size_t k = 0; k < lat.num_checks(); ++k) {
        const Face &f = lat.faces()[k];
        int parity = 0;
        for (auto q : f.sites) {
            parity ^= f.type == CheckType::Z ? frame.x[q] : frame.z[q];
        }
        s.set_outcome(k, parity ? -1 : 1);
    }
    return s;
}

PauliFrame recovery_frame(const Syndrome &s, const Lattice &lat) {
    check_syndrome(s, lat);
    PauliFrame r(lat.num_qubits());
    for (std::size_t k = 0; k < lat.num_checks(); ++k) {
        if (s.outcome(k) != -1) {
            continue;
        }
        const Face &f = lat.faces()[k];
        std::size_t row = std::size_t(std::max(f.row, 0));
        std::size_t col = std::size_t(std::max(f.col, 0));
        if (f.type == CheckType::X) {
            for (std::size_t rr = 0; rr <= row; ++rr) {
                r.z[lat.site(rr, col)] ^= 1;
            }
        } else {
            for (std::size_t cc = 0; cc <= col; ++cc) {
                r.x[lat.site(row, cc)] ^= 1;
            }
        }
    }
    return r;
}

Logical homology_class(const PauliFrame &frame, const Lattice &lat) {
    if (!syndrome_of(frame, lat).is_trivial()) {
        throw PreconditionError("homology class requires a frame with trivial syndrome");
    }
    int xbar = 0, zbar = 0;
    for (auto q : lat.z_logical_support()) {
        xbar ^= frame.x[q];
    }
    for (auto q : lat.x_logical_support()) {
        zbar ^= frame.z[q];
    }
    return pauli_from_parts(xbar != 0, zbar != 0);
}

PauliFrame logical_frame(Logical logical, const Lattice &lat) {
    PauliFrame f(lat.num_qubits());
    if (x_part(logical)) {
        for (auto q : lat.x_logical_support()) {
            f.x[q] = 1;
        }
    }
    if (z_part(logical)) {
        for (auto q : lat.z_logical_support()) {
            f.z[q] = 1;
        }
    }
    return f;
}

}  // namespace tnqec
