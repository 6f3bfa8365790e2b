// Copyright 2026 The thermocc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef THERMOCC_ERRORS_H_
#define THERMOCC_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thermocc {

// Base of every recoverable input/validation failure. The CLI maps these to
// exit code 1; anything else escaping a subcommand is an internal error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Frame codec.
class FormatError : public Error {
 public:
  using Error::Error;
};
class TruncationError : public Error {
 public:
  using Error::Error;
};
class MetadataError : public Error {
 public:
  using Error::Error;
};

class SequenceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Annotation text. `line` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};
class RangeError : public ParseError {
 public:
  using ParseError::ParseError;
};
class DegenerateBoxError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};
class InfeasibleSplitError : public Error {
 public:
  using Error::Error;
};
class IntegrityError : public Error {
 public:
  using Error::Error;
};
class AlignmentError : public Error {
 public:
  using Error::Error;
};
class SpecError : public Error {
 public:
  using Error::Error;
};
class OracleScaleError : public Error {
 public:
  using Error::Error;
};

}  // namespace thermocc

#endif  // THERMOCC_ERRORS_H_
