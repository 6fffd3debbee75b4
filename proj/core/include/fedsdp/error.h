// Copyright 2026 The fedsdp Authors.
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

#ifndef FEDSDP_ERROR_H_
#define FEDSDP_ERROR_H_

#include <stdexcept>
#include <string>

namespace fedsdp {

// Base of every error thrown by the library. The CLI maps ConfigError (and
// its subclasses) to exit code 1 and every other Error to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration: bad field value, unknown key, dimension mismatch.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Invalid argument to a numeric primitive (e.g. negative noise scale).
class ParameterError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// A precondition of the convergence bound does not hold.
class ConstraintError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptyDataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed cell in a CSV file; the message names the row and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t row)
      : Error(message), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

// Uploads that cannot be combined (layout mismatch, nothing to aggregate).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// gamma_private + gamma_general == 0, so the contribution ratio is undefined.
class DegenerateContributionError : public Error {
 public:
  using Error::Error;
};

// Local training produced non-finite parameters or loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace fedsdp

#endif  // FEDSDP_ERROR_H_
