// Copyright 2026 The gaussperm Authors
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

#ifndef GAUSSPERM_ERRORS_HPP
#define GAUSSPERM_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gaussperm {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong shape, non-finite entries, bad indices.
class InvalidInput : public Error {
   public:
    using Error::Error;
};

/// Arguments that are well formed but violate a policy (e.g. alpha too small).
class ValidationError : public Error {
   public:
    using Error::Error;
};

/// An exact algorithm was asked for a problem above its configured ceiling.
class SizeLimitError : public Error {
   public:
    using Error::Error;
};

/// Matrix text could not be parsed. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
   public:
    ParseError(const std::string &message, std::size_t line)
        : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const { return line_; }

   private:
    std::size_t line_;
};

class NumericalError : public Error {
   public:
    using Error::Error;
};

class NotPositiveSemidefinite : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

/// A per-sample product left the double range.
class OverflowError : public NumericalError {
   public:
    OverflowError(const std::string &message, std::uint64_t sample_index)
        : NumericalError(message), sample_index_(sample_index) {}
    std::uint64_t sample_index() const { return sample_index_; }

   private:
    std::uint64_t sample_index_;
};

/// Two independent computations of the same quantity disagreed.
class ConsistencyError : public Error {
   public:
    using Error::Error;
};

}  // namespace gaussperm

#endif
