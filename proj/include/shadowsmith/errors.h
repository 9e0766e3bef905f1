/**
 * Copyright 2026 The Shadowsmith Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SHADOWSMITH_ERRORS_H_
#define SHADOWSMITH_ERRORS_H_

#include <stdexcept>
#include <string>

namespace shadowsmith {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user configuration (bad ranges, missing background pool, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input data that violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed encoded data: JSON, RLE, polygons, PNG, tensor files.
class DecodeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Caller broke a function precondition (shape mismatch, empty reference...).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace shadowsmith

#endif  // SHADOWSMITH_ERRORS_H_
