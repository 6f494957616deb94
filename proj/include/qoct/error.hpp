// Copyright 2026 The qoct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qoct {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two objects that must share a grid (spatial or temporal) do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters or preconditions supplied by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Non-finite amplitudes appeared during a propagation.
class NumericalBlowup : public Error {
 public:
  using Error::Error;
};

/// Imaginary-time relaxation ran out of steps.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_delta)
      : Error(what), last_delta_(last_delta) {}
  double last_delta() const noexcept { return last_delta_; }

 private:
  double last_delta_;
};

/// The optimization cannot produce a new field (zero update, annihilated by a filter).
class StalledError : public Error {
 public:
  using Error::Error;
};

}  // namespace qoct
