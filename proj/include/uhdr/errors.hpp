// Copyright (c) 2026 The uhdr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace uhdr {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Odd mosaic dimensions, mismatched tensor shapes.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Camera profile failed validation (singular ccm, inverted noise bounds, ...).
class ProfileError : public Error {
public:
    using Error::Error;
};

/// Synthesis or command configuration failed validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input values outside an operation's domain (negative signal, non-positive ratio).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure: missing file, unwritable directory.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed container. Subclasses distinguish the failure.
class FormatError : public Error {
public:
    using Error::Error;
};

class BadMagicError : public FormatError {
public:
    using FormatError::FormatError;
};

class VersionError : public FormatError {
public:
    using FormatError::FormatError;
};

class TruncatedError : public FormatError {
public:
    using FormatError::FormatError;
};

}  // namespace uhdr
