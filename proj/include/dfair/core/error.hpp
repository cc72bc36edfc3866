//
// Copyright 2026 The dfair Authors
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
//

#pragma once

#include <stdexcept>
#include <string>

namespace dfair {

inline constexpr const char* kVersion = "0.1.0";

// Base of every error raised by the library. The CLI maps these to exit
// code 2 (input error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The data does not conform to its schema (unknown label, bad kind, ...).
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Malformed input file (wrong column count, unparsable number, ...).
class FormatError : public Error {
 public:
  using Error::Error;
};

// A metric or operation is undefined for its argument.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Argument violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

namespace internal {

inline void Require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace internal
}  // namespace dfair
