// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fnd {

using DenseVector = std::vector<double>;

/// Sparse row with strictly ascending indices and finite non-zero values.
struct SparseVector {
  struct Entry {
    std::uint32_t index;
    double value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::size_t dim = 0;
  std::vector<Entry> entries;

  std::size_t nnz() const noexcept { return entries.size(); }

  /// Drops exact zeros.
  static SparseVector from_dense(std::span<const double> dense);
  DenseVector to_dense() const;

  /// Checks ordering, bounds, finiteness and non-zero values.
  bool well_formed() const noexcept;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

double dot(const SparseVector& a, const SparseVector& b) noexcept;
double dot(const SparseVector& a, std::span<const double> dense) noexcept;
double squared_norm(const SparseVector& a) noexcept;

}  // namespace fnd
