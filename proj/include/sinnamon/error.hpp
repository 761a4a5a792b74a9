// Copyright 2026-present the sinnamon project
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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sinnamon {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on arguments or configuration was violated.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// An external id was inserted while already live.
class DuplicateId : public Error {
  public:
    explicit DuplicateId(std::uint64_t id)
        : Error("duplicate id " + std::to_string(id)), id_(id) {}
    std::uint64_t id() const noexcept { return id_; }

  private:
    std::uint64_t id_;
};

/// An external id was released or deleted while not live.
class UnknownId : public Error {
  public:
    explicit UnknownId(std::uint64_t id)
        : Error("unknown id " + std::to_string(id)), id_(id) {}
    std::uint64_t id() const noexcept { return id_; }

  private:
    std::uint64_t id_;
};

/// The vector store does not hold a requested id.
class MissingVector : public Error {
  public:
    explicit MissingVector(std::uint64_t id)
        : Error("vector " + std::to_string(id) + " not in store"), id_(id) {}
    std::uint64_t id() const noexcept { return id_; }

  private:
    std::uint64_t id_;
};

/// A file could not be opened, read or written.
class IoError : public Error {
  public:
    using Error::Error;
};

/// Serialized index or snapshot is not readable by this build.
class IndexFormatError : public Error {
  public:
    using Error::Error;
};

/// A numerical routine could not produce a trustworthy value.
class NumericError : public Error {
  public:
    using Error::Error;
};

/// Numerical integration did not reach its requested tolerance. Carries the
/// best estimate and the error bound actually achieved.
class QuadratureError : public NumericError {
  public:
    QuadratureError(const std::string& what, double estimate, double achieved)
        : NumericError(what + " (achieved tolerance " + std::to_string(achieved) + ")"),
          estimate_(estimate),
          achieved_(achieved) {}
    double estimate() const noexcept { return estimate_; }
    double achieved_tolerance() const noexcept { return achieved_; }

  private:
    double estimate_;
    double achieved_;
};

}  // namespace sinnamon
