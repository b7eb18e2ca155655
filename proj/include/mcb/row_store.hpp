#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <mutex>

#include "mcb/errors.hpp"

namespace mcb {

/// Append-only chunked storage with one writer and lock-free readers.
///
/// Rows below `size()` never move, so readers may index them while a writer
/// appends under `lock()`. The writer publishes new rows with `publish()`.
template <class Row>
class RowStore {
 public:
  static constexpr std::size_t kChunkBits = 14;
  static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
  static constexpr std::size_t kMaxChunks = std::size_t{1} << 16;

  RowStore() : chunks_(std::make_unique<std::unique_ptr<Row[]>[]>(kMaxChunks)) {}

  std::size_t size() const { return published_.load(std::memory_order_acquire); }

  const Row& operator[](std::size_t i) const { return chunks_[i >> kChunkBits][i & (kChunkSize - 1)]; }

  /// Writer side; caller holds `lock()`. Rows become visible on `publish()`.
  void push_back(const Row& row) {
    const std::size_t i = pending_;
    const std::size_t chunk = i >> kChunkBits;
    if (chunk >= kMaxChunks) throw NMaxTooSmall("row store capacity exhausted");
    if (!chunks_[chunk]) chunks_[chunk] = std::make_unique<Row[]>(kChunkSize);
    chunks_[chunk][i & (kChunkSize - 1)] = row;
    ++pending_;
  }
  void publish() { published_.store(pending_, std::memory_order_release); }
  std::size_t pending() const { return pending_; }

  std::unique_lock<std::mutex> lock() const { return std::unique_lock<std::mutex>(mutex_); }

 private:
  std::unique_ptr<std::unique_ptr<Row[]>[]> chunks_;
  std::size_t pending_ = 0;
  std::atomic<std::size_t> published_{0};
  mutable std::mutex mutex_;
};

}  // namespace mcb
