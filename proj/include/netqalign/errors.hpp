// Copyright 2026 The netqalign Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netqalign {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (range, shape, distribution).
class ValidationError : public Error {
   public:
    using Error::Error;
};

/// Malformed text input. Carries the 1-based line number.
class ParseError : public ValidationError {
   public:
    ParseError(std::size_t line, const std::string &what)
        : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

   private:
    std::size_t line_;
};

/// Structurally degenerate input, e.g. a zero-sum row under the `error` dangling policy.
class DegenerateInputError : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

/// Requested explicit materialization exceeds the configured cap.
class SizeError : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

/// Non-finite values, solver non-convergence.
class NumericalError : public Error {
   public:
    using Error::Error;
};

/// An iteration produced the zero vector.
class BreakdownError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

/// Conditioning on a zero-probability measurement outcome.
class ConditioningError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

}  // namespace netqalign
