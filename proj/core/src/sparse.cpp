// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/sparse.hpp"

#include <cmath>

namespace fnd {

SparseVector SparseVector::from_dense(std::span<const double> dense) {
  SparseVector out;
  out.dim = dense.size();
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) out.entries.push_back({static_cast<std::uint32_t>(i), dense[i]});
  }
  return out;
}

DenseVector SparseVector::to_dense() const {
  DenseVector out(dim, 0.0);
  for (const auto& e : entries) out[e.index] = e.value;
  return out;
}

bool SparseVector::well_formed() const noexcept {
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (e.index >= dim || !std::isfinite(e.value) || e.value == 0.0) return false;
    if (k > 0 && entries[k - 1].index >= e.index) return false;
  }
  return true;
}

double dot(const SparseVector& a, const SparseVector& b) noexcept {
  double sum = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->index == ib->index) {
      sum += ia->value * ib->value;
      ++ia;
      ++ib;
    } else if (ia->index < ib->index) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return sum;
}

double dot(const SparseVector& a, std::span<const double> dense) noexcept {
  double sum = 0.0;
  for (const auto& e : a.entries) sum += e.value * dense[e.index];
  return sum;
}

double squared_norm(const SparseVector& a) noexcept {
  double sum = 0.0;
  for (const auto& e : a.entries) sum += e.value * e.value;
  return sum;
}

}  // namespace fnd
