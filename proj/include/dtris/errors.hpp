// SPDX-License-Identifier: Apache-2.0
//
// dtris: dual-tier RIS-assisted downlink network simulator
// Copyright (C) 2026 dtris contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace dtris {

// Common base so callers can catch any library error in one handler.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite coordinates or a geometry that violates the layout invariants.
struct InvalidGeometryError : Error {
  using Error::Error;
};

// Zero link distance; the path-loss model is undefined at d = 0.
struct DegenerateDistanceError : Error {
  using Error::Error;
};

// A channel coefficient with zero magnitude where a phase is required.
struct DegenerateChannelError : Error {
  using Error::Error;
};

// Matrix/vector dimensions do not agree.
struct ShapeError : Error {
  using Error::Error;
};

// Effective channel matrix is rank deficient within tolerance; the caller
// is expected to re-draw the geometry.
struct SingularChannelError : Error {
  using Error::Error;
};

struct InvalidNoiseError : Error {
  using Error::Error;
};

struct InvalidInputError : Error {
  using Error::Error;
};

// Exhaustive enumeration requested above the factorial guard.
struct TooLargeError : Error {
  using Error::Error;
};

struct InvalidAssociationError : Error {
  using Error::Error;
};

// Config file could not be read or parsed; message carries the line number.
struct ParseError : Error {
  using Error::Error;
};

// Config parsed but violates an invariant; message names the field.
struct ValidationError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// A Monte Carlo trial exhausted its geometry re-draw budget.
struct TrialFailedError : Error {
  using Error::Error;
};

} // namespace dtris
