// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <cstddef>
#include <list>
#include <span>
#include <vector>

namespace fnd::detail {

/// Least-recently-used cache of full kernel rows, bounded by a byte budget.
/// Always holds at least two rows so an SMO step can keep both of its rows.
class KernelCache {
 public:
  KernelCache(std::size_t rows, std::size_t budget_bytes)
      : row_length_(rows), slots_(rows) {
    const std::size_t row_bytes = std::max<std::size_t>(1, rows * sizeof(double));
    capacity_ = std::max<std::size_t>(2, budget_bytes / row_bytes);
  }

  /// Returns the cached row and true, or a row to fill and false.
  std::pair<std::span<double>, bool> acquire(std::size_t row) {
    auto& slot = slots_[row];
    if (slot.cached) {
      lru_.splice(lru_.end(), lru_, slot.position);
      ++hits_;
      return {slot.values, true};
    }
    ++misses_;
    std::vector<double> storage;
    if (lru_.size() >= capacity_) {
      auto& victim = slots_[lru_.front()];
      storage = std::move(victim.values);
      victim.values = {};
      victim.cached = false;
      lru_.pop_front();
    }
    storage.resize(row_length_);
    slot.values = std::move(storage);
    slot.cached = true;
    slot.position = lru_.insert(lru_.end(), row);
    return {slot.values, false};
  }

  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }

 private:
  struct Slot {
    std::vector<double> values;
    bool cached = false;
    std::list<std::size_t>::iterator position;
  };

  std::size_t row_length_;
  std::size_t capacity_;
  std::vector<Slot> slots_;
  std::list<std::size_t> lru_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace fnd::detail
