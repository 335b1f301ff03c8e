// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "embrmt/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "embrmt/errors.hpp"

namespace embrmt {

std::size_t hardware_workers() noexcept {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task) {
  if (count == 0) return;
  workers = std::clamp<std::size_t>(workers, 1, count);

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_member = count;
  std::exception_ptr failure;

  const auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        const std::lock_guard lock(mu);
        if (i < failed_member) {
          failed_member = i;
          failure = std::current_exception();
        }
      }
    }
  };

  if (workers == 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  }

  if (!failure) return;
  try {
    std::rethrow_exception(failure);
  } catch (const MemberError&) {
    throw;
  } catch (const Error& e) {
    throw MemberError(failed_member, e.kind(), e.what());
  } catch (const std::exception& e) {
    throw MemberError(failed_member, ErrorKind::kNumerical, e.what());
  }
}

}  // namespace embrmt
