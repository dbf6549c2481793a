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

#ifndef TNQEC_ERRORS_H
#define TNQEC_ERRORS_H

#include <stdexcept>
#include <string>

namespace tnqec {

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shared label with mismatched dimensions, or malformed tensor.
struct ContractError : Error {
    using Error::Error;
};

/// Invalid bipartition passed to `svd_split`.
struct SplitError : Error {
    using Error::Error;
};

/// Network layout does not reduce to a scalar.
struct StructuralError : Error {
    using Error::Error;
};

/// Argument outside its mathematical domain (sites off-lattice, gamma > 1, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Exhaustive or dense computation requested beyond its size bound.
struct CapacityError : Error {
    using Error::Error;
};

/// Channel or state fails a validity check (e.g. trace preservation).
struct ValidationError : Error {
    using Error::Error;
};

/// A precondition relating several arguments does not hold.
struct PreconditionError : Error {
    using Error::Error;
};

/// The syndrome has zero probability under the supplied noise model.
struct ZeroProbabilityError : Error {
    using Error::Error;
};

/// Diamond-norm maximization did not certify; carries the best value found.
struct ConvergenceError : Error {
    ConvergenceError(const std::string &what, double best_lower_bound)
        : Error(what), best_lower_bound(best_lower_bound) {
    }
    double best_lower_bound;
};

/// Malformed experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace tnqec

#endif
