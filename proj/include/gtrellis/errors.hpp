// Copyright 2026 The gtrellis Authors
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

#include <stdexcept>
#include <string>

namespace gtrellis {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector/matrix shapes that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter outside its admissible range (prevalence, crossover, density, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The observed test vector has zero probability under the model, e.g. a
/// noiseless observation outside the image of the OR channel.
class NotASyndromeError : public Error {
 public:
  using Error::Error;
};

/// A size guard was exceeded (trellis width, enumeration size, path count).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gtrellis
