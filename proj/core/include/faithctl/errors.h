// Copyright 2026 The faithctl Authors.
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

#ifndef FAITHCTL_ERRORS_H_
#define FAITHCTL_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace faithctl {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Input that cannot be parsed at all (malformed JSON, bad CSV row).
// `line` is 1-based; 0 when the error is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A well-formed record whose content violates the data model
// (unknown speaker label, empty evidence, ...).
class RecordError : public Error {
 public:
  RecordError(const std::string& what, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Transport-level failure talking to a remote backend. Retriable.
class NetworkError : public Error {
 public:
  using Error::Error;
};

// The remote backend answered, but not with what the wire protocol promises.
// Not retried.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// A remote backend stayed unreachable after all configured retries.
class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

}  // namespace faithctl

#endif  // FAITHCTL_ERRORS_H_
