// Copyright 2026 The augforge Authors.
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

#ifndef AUGFORGE_ERROR_HPP_
#define AUGFORGE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace augforge {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File missing, unreadable, or unwritable.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed file content: corrupt PNG, bad JSON, unsupported OBJ record.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Two buffers that must agree in size do not.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A type invariant or operation precondition does not hold.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// A generation/segmentation/tracking service failed or replied badly.
class BackendError : public Error {
 public:
  using Error::Error;
};

}  // namespace augforge

#endif  // AUGFORGE_ERROR_HPP_
