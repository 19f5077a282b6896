// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <vector>

#include "sccv/core/types.hpp"

namespace sccv::pipeline {

/// Multi-producer queue with a hard capacity. A push into a full queue
/// evicts the oldest element instead of blocking the producer.
template <typename T> class BoundedQueue {
public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ < 1)
      throw Error("queue capacity must be >= 1");
  }

  /// Returns true when an element was evicted to make room.
  bool push(T item) {
    bool dropped = false;
    {
      std::lock_guard lock(mu_);
      if (items_.size() == capacity_) {
        items_.pop_front();
        dropped = true;
      }
      items_.push_back(std::move(item));
      high_water_ = std::max(high_water_, items_.size());
    }
    cv_.notify_one();
    return dropped;
  }

  /// Moves up to `max` elements into `out`, waiting up to `timeout` for the
  /// first one. Returns false once the queue is closed and drained.
  bool pop_batch(std::vector<T> &out, std::size_t max,
                 std::chrono::milliseconds timeout) {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, timeout, [&] { return closed_ || !items_.empty(); });
    const auto n = std::min(max, items_.size());
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(std::move(items_.front()));
      items_.pop_front();
    }
    return !(closed_ && items_.empty() && n == 0);
  }

  void close() {
    {
      std::lock_guard lock(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return items_.size();
  }
  std::size_t high_water() const {
    std::lock_guard lock(mu_);
    return high_water_;
  }
  std::size_t capacity() const { return capacity_; }

private:
  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<T> items_;
  std::size_t high_water_ = 0;
  bool closed_ = false;
};

} // namespace sccv::pipeline
