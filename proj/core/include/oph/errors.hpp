// Copyright 2026 The oph Authors
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

namespace oph {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad label, dimension mismatch, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A size cap was exceeded (Hilbert-space dimension, memory budget).
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// A ground state could not be selected because the gap closed.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, double lambda) : Error(what), lambda_(lambda) {}
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

/// The state path is not defined (vanishing norm before normalization).
class SingularPathError : public Error {
 public:
  SingularPathError(const std::string& what, double lambda) : Error(what), lambda_(lambda) {}
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

}  // namespace oph
