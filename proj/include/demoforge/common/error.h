// Copyright 2026 The Demoforge Authors
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

#ifndef DEMOFORGE_COMMON_ERROR_H_
#define DEMOFORGE_COMMON_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace demoforge {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedTaskError : public Error {
 public:
  using Error::Error;
};

// Two interacting atoms closer than the singularity threshold.
class SingularityError : public Error {
 public:
  SingularityError(int i, int j, double r);
  int first() const { return i_; }
  int second() const { return j_; }

 private:
  int i_;
  int j_;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss or logit; carries the offending sample index (-1 if none).
class NumericError : public Error {
 public:
  NumericError(const std::string& what, int64_t sample);
  int64_t sample() const { return sample_; }

 private:
  int64_t sample_;
};

class OrderingError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

// Truncated or inconsistent container; offset is the byte position of the
// record that could not be read.
class CorruptionError : public Error {
 public:
  CorruptionError(const std::string& what, uint64_t offset);
  uint64_t offset() const { return offset_; }

 private:
  uint64_t offset_;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class LifecycleError : public Error {
 public:
  using Error::Error;
};

class EmptyExportError : public Error {
 public:
  using Error::Error;
};

class PolicyOutputError : public Error {
 public:
  using Error::Error;
};

}  // namespace demoforge

#endif  // DEMOFORGE_COMMON_ERROR_H_
