// Copyright 2026 The zeno-nh Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace zeno {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (bad index, wrong sector, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A requested object would exceed a configured size cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// The lattice/boundary combination does not support the operation.
class UnsupportedConfiguration : public Error {
 public:
  using Error::Error;
};

/// Floating point breakdown: underflow, non-convergence, failed residual check.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Time integration violated its conservation diagnostics.
class IntegrationFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A division by a vanishing dissipative coefficient.
class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Input that is formally valid but degenerate (zero overlaps, zero norm).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Configuration validation failure; `field()` names the offending entry.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace zeno
