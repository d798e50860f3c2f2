// Copyright 2026 The convbound Authors.
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

namespace convbound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed magic, header or JSON structure.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Declared dimensions disagree with the payload.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise out-of-domain numeric input.
class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Input size n incompatible with the filter (n must exceed max(h, w)).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Explicit Jacobian would exceed the configured entry cap.
class SizeCapError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of the call was violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace convbound
