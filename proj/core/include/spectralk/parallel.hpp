#pragma once

#include <cstddef>
#include <functional>

namespace spectralk {

/// Runs body(0) ... body(count - 1) on up to `threads` workers (0 means hardware
/// concurrency). Work items are claimed dynamically, so callers must write each
/// result into a slot indexed by the item to keep output order-independent.
/// The first exception thrown by any item is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

std::size_t resolve_thread_count(std::size_t requested) noexcept;

}  // namespace spectralk
