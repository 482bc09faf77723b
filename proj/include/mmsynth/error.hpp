// Copyright 2026 The mmsynth Authors.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmsynth {

// Base class for all recoverable errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed surface syntax. `position` is a byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Malformed input file. `location` names where in the file the problem is.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, const std::string& location)
      : Error(location.empty() ? what : what + " (" + location + ")"),
        location_(location) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

// Network, authentication or timeout failure talking to a completion API.
class TransportError : public Error {
 public:
  using Error::Error;
};

// A completion did not contain a recognizable program.
class ExtractionError : public Error {
 public:
  using Error::Error;
};

// A well-formed request that cannot be served, e.g. an empty candidate set.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace mmsynth
