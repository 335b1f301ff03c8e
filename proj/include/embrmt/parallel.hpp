// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <vector>

namespace embrmt {

/// Runs task(i) for i in [0, count) on up to `workers` threads. Tasks are
/// claimed from a shared counter, so the assignment of members to threads
/// varies, but every result lands in its member slot. When tasks fail, the
/// failure of the lowest member index is rethrown as a MemberError.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

/// Number of hardware threads, at least 1.
std::size_t hardware_workers() noexcept;

template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, std::size_t workers, Fn&& fn) {
  std::vector<std::optional<T>> slots(count);
  parallel_for(count, workers, [&](std::size_t i) { slots[i].emplace(fn(i)); });
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace embrmt
