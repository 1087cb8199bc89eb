/* Copyright 2026 The nvbang Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>

namespace nvbang {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Out-of-domain argument (non-positive drive, dt, ...). Maps to a usage error in the CLI.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Operation called for parameters in the wrong driving regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// Qubit gap vanishes (E = 0); no bang-bang synthesis is attempted there.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

// A closed-form pulse failed its propagator check. Indicates a convention bug.
class SynthesisError : public Error {
 public:
  using Error::Error;
};

// The weak-driving shooting solve found no pole-to-pole pulse.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

}  // namespace nvbang
