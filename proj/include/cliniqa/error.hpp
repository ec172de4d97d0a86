// Copyright 2026 The cliniqa Authors.
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

namespace cliniqa {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// File content is syntactically malformed (JSON, TSV, CSV, UTF-8).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Data is well-formed but violates a cross-record invariant, e.g. an
/// answer offset that does not reproduce the answer text, or a reference
/// to a note that does not exist. The message names the offending record.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// A function argument is outside its documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace cliniqa
