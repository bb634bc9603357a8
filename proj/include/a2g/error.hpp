// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace a2g {

/// Argument outside the domain of an operation (negative height, d_los
/// beyond the link, zero building count, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed text input: scenario tables, network files, datasets, grids.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent scene parameters (e.g. buildings wider than their cell).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Training or curve fitting failed (divergence, degenerate data).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace a2g
