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

// Python bindings for the tnqec decoder, noise models and benchmarks.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "tnqec/baselines.h"
#include "tnqec/bench.h"
#include "tnqec/channels.h"
#include "tnqec/errors.h"
#include "tnqec/lattice.h"
#include "tnqec/noise_models.h"
#include "tnqec/tn_decoder.h"

namespace py = pybind11;
using namespace tnqec;

namespace {

Syndrome syndrome_from_bits(const std::string &bits, const Lattice &lat) {
    if (bits.size() != lat.num_checks()) {
        throw DomainError("syndrome needs one character per check");
    }
    Syndrome s = Syndrome::trivial(lat);
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k] != '0' && bits[k] != '1') {
            throw DomainError("syndrome characters must be '0' or '1'");
        }
        s.set_outcome(k, bits[k] == '1' ? -1 : 1);
    }
    return s;
}

std::string logical_name(Logical l) {
    return std::string(1, pauli_char(l));
}

}  // namespace

PYBIND11_MODULE(_tnqec, m) {
    m.doc() = "Tensor-network decoding of the surface code";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<ZeroProbabilityError>(m, "ZeroProbabilityError", base.ptr());

    py::enum_<Norm>(m, "Norm").value("TRACE", Norm::Trace).value("DIAMOND", Norm::Diamond);

    py::class_<Lattice>(m, "Lattice")
        .def_static("build", &Lattice::build, py::arg("width"), py::arg("height"))
        .def_property_readonly("width", &Lattice::width)
        .def_property_readonly("height", &Lattice::height)
        .def_property_readonly("num_qubits", &Lattice::num_qubits)
        .def_property_readonly("num_checks", &Lattice::num_checks)
        .def_property_readonly("num_x_faces", &Lattice::num_x_faces)
        .def_property_readonly("z_logical_support", &Lattice::z_logical_support)
        .def_property_readonly("x_logical_support", &Lattice::x_logical_support)
        .def("to_json", [](const Lattice &lat) { return lat.to_json().dump(); })
        .def("syndrome_of",
             [](const Lattice &lat, const std::vector<std::uint8_t> &x, const std::vector<std::uint8_t> &z) {
                 PauliFrame f(lat.num_qubits());
                 if (x.size() != f.x.size() || z.size() != f.z.size()) {
                     throw DomainError("frame size does not match the lattice");
                 }
                 f.x = x;
                 f.z = z;
                 return syndrome_of(f, lat).bits();
             },
             py::arg("x"), py::arg("z"));

    py::class_<IsingParams>(m, "IsingParams")
        .def(py::init([](double beta, double h, double j1, double j2) {
                 IsingParams p{beta, h, j1, j2};
                 p.validate();
                 return p;
             }),
             py::arg("beta") = 1.0, py::arg("h") = 0.01, py::arg("j1") = 1.0, py::arg("j2") = -1.5)
        .def_readwrite("beta", &IsingParams::beta)
        .def_readwrite("h", &IsingParams::h)
        .def_readwrite("j1", &IsingParams::j1)
        .def_readwrite("j2", &IsingParams::j2);

    py::class_<NoiseNetworkFactor>(m, "NoiseNetworkFactor")
        .def_readonly("rows", &NoiseNetworkFactor::rows)
        .def_readonly("cols", &NoiseNetworkFactor::cols)
        .def_readonly("bond_dim", &NoiseNetworkFactor::bond_dim)
        .def_readonly("log_scale", &NoiseNetworkFactor::log_scale)
        .def_property_readonly("pauli_diagonal", &NoiseNetworkFactor::pauli_diagonal);

    m.def("amplitude_damping_factors",
          [](double gamma, const Lattice &lat) { return iid_network_factors(amplitude_damping(gamma), lat); },
          py::arg("gamma"), py::arg("lattice"));
    m.def("pauli_factors",
          [](const Eigen::Vector4d &p, const Lattice &lat) {
              return iid_network_factors(QubitChannel::pauli_channel(p), lat);
          },
          py::arg("probabilities"), py::arg("lattice"));
    m.def("cbf_factors", &cbf_network_factors, py::arg("params"), py::arg("lattice"));
    m.def("cbf_mcmc_sample", &cbf_mcmc_sample, py::arg("params"), py::arg("lattice"), py::arg("sweeps"),
          py::arg("seed"));

    py::class_<DecoderConfig>(m, "DecoderConfig")
        .def(py::init([](std::size_t chi, Norm norm) {
                 DecoderConfig c;
                 c.chi = chi;
                 c.norm = norm;
                 c.validate();
                 return c;
             }),
             py::arg("chi") = 8, py::arg("norm") = Norm::Diamond)
        .def_static("exact",
                    [](Norm norm) {
                        DecoderConfig c;
                        c.chi = kUnboundedBond;
                        c.norm = norm;
                        return c;
                    },
                    py::arg("norm") = Norm::Diamond)
        .def_readwrite("chi", &DecoderConfig::chi)
        .def_readwrite("norm", &DecoderConfig::norm)
        .def_readwrite("tol", &DecoderConfig::tol);

    py::class_<DecodeResult>(m, "DecodeResult")
        .def_property_readonly("correction", [](const DecodeResult &r) { return logical_name(r.correction); })
        .def_property_readonly("ptm", [](const DecodeResult &r) { return Eigen::Matrix4d(r.channel.ptm()); })
        .def_readonly("log_probability", &DecodeResult::log_probability)
        .def_readonly("truncation_error", &DecodeResult::truncation_error)
        .def_readonly("wall_seconds", &DecodeResult::wall_seconds);

    m.def("decode",
          [](const std::string &syndrome, const NoiseNetworkFactor &noise, const Lattice &lat,
             const DecoderConfig &cfg) {
              py::gil_scoped_release release;
              return decode(syndrome_from_bits(syndrome, lat), noise, lat, cfg);
          },
          py::arg("syndrome"), py::arg("noise"), py::arg("lattice"), py::arg("config") = DecoderConfig{});
    m.def("mwpm_decode",
          [](const std::string &syndrome, const Lattice &lat) {
              return logical_name(mwpm_decode(syndrome_from_bits(syndrome, lat), lat));
          },
          py::arg("syndrome"), py::arg("lattice"));

    m.def("trace_distance_from_identity",
          [](const Eigen::Matrix4d &ptm) { return trace_distance_from_identity(QubitChannel(ptm)); }, py::arg("ptm"));
    m.def("diamond_distance_from_identity",
          [](const Eigen::Matrix4d &ptm) { return diamond_distance_from_identity(QubitChannel(ptm)); },
          py::arg("ptm"));

    m.def("decode_request",
          [](const std::string &request, std::uint64_t seed) {
              DecodeRequest req = DecodeRequest::from_json(nlohmann::json::parse(request));
              py::gil_scoped_release release;
              return run_decode_request(req, seed).dump();
          },
          py::arg("request"), py::arg("seed") = DiamondOptions{}.seed);
    m.def("run_benchmark",
          [](const std::string &config) {
              ExperimentConfig cfg = ExperimentConfig::from_json(nlohmann::json::parse(config));
              cfg.validate();
              py::gil_scoped_release release;
              std::vector<ResultRow> rows;
              if (cfg.kind == ExperimentKind::CbfSweep) {
                  rows = run_cbf_benchmark(cfg);
              } else if (cfg.kind == ExperimentKind::Timing) {
                  rows = run_timing(cfg).rows;
              } else if (cfg.kind == ExperimentKind::OracleCheck) {
                  throw ConfigError("use run_oracle_check for oracle-check configs");
              } else {
                  rows = run_ad_benchmark(cfg);
              }
              return format_results(rows, Format::Json, cfg.to_json());
          },
          py::arg("config"));
}
