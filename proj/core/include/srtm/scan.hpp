#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "srtm/errors.hpp"
#include "srtm/parallel.hpp"

namespace srtm {

enum class ScanDirection { forward, reverse };

/// Instrumentation of one scan run. depth is the longest dependency chain of
/// combine applications (the span); combine_count is the total work.
struct ScanStats {
  std::int64_t combine_count = 0;
  int depth = 0;
};

namespace detail {

// Inclusive Blelloch scan over an implicit left-leaning binary tree.
//
// Up-sweep: level h node j is the combination of elements
// [j * 2^h, min((j+1) * 2^h, N)); a missing right child makes the node a copy
// of its left child (the implicit padding).
//
// Down-sweep: pfx[h][j] is the combination of all elements before j * 2^h
// (absent for j on the leftmost spine). The inclusive result for element i,
// i < N-1, is pfx[0][i+1]; the last result is the root total. Harvesting the
// outputs from the prefixes keeps the work at most 2N - 2 combines.
template <typename T, typename Combine>
std::vector<T> scan_forward(std::vector<T> elems, Combine&& combine, WorkerPool* pool,
                            ScanStats* stats) {
  const std::size_t n = elems.size();
  ScanStats local;
  if (n == 1) {
    if (stats) *stats = local;
    return elems;
  }

  auto for_each = [&](std::size_t count, auto&& body) {
    if (pool && pool->worker_count() > 1 && count > 1) {
      pool->parallel_for(count, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) body(i);
      });
    } else {
      for (std::size_t i = 0; i < count; ++i) body(i);
    }
  };

  std::vector<std::vector<T>> tot;
  tot.push_back(std::move(elems));
  while (tot.back().size() > 1) {
    const std::vector<T>& below = tot.back();
    const std::size_t size = (below.size() + 1) / 2;
    std::vector<T> level(size);
    for_each(size, [&](std::size_t j) {
      if (2 * j + 1 < below.size()) {
        level[j] = combine(below[2 * j], below[2 * j + 1]);
      } else {
        level[j] = below[2 * j];
      }
    });
    local.combine_count += static_cast<std::int64_t>(below.size() / 2);
    local.depth += 1;
    tot.push_back(std::move(level));
  }

  // pfx[h][0] is always absent; every other entry holds a value.
  const std::size_t levels = tot.size();
  std::vector<std::vector<T>> pfx(levels);
  for (std::size_t h = 0; h < levels; ++h) pfx[h].resize(tot[h].size());
  for (std::size_t h = levels - 1; h >= 1; --h) {
    const std::size_t size = tot[h - 1].size();
    for_each(size, [&](std::size_t j) {
      if (j == 0) return;
      if (j % 2 == 0) {
        pfx[h - 1][j] = pfx[h][j / 2];
      } else if (j == 1) {
        pfx[h - 1][j] = tot[h - 1][0];
      } else {
        pfx[h - 1][j] = combine(pfx[h][j / 2], tot[h - 1][j - 1]);
      }
    });
    const std::int64_t combines =
        static_cast<std::int64_t>(size / 2) - (size >= 2 ? 1 : 0);
    local.combine_count += combines;
    if (combines > 0) local.depth += 1;
  }

  std::vector<T> out(n);
  for_each(n - 1, [&](std::size_t i) { out[i] = std::move(pfx[0][i + 1]); });
  out[n - 1] = std::move(tot.back()[0]);
  if (stats) *stats = local;
  return out;
}

} // namespace detail

/// All prefix combinations of `elems` under the associative `combine`.
/// Forward: out[k] = a_1 (*) ... (*) a_{k+1}. Reverse: out[k] = a_{k+1} (*)
/// ... (*) a_N. Runs on the worker pool with level-synchronous barriers; the
/// reduction tree is fixed, so results are bit-identical for every worker
/// count. Throws ModelError on empty input.
template <typename T, typename Combine>
std::vector<T> associative_scan(std::vector<T> elems, Combine&& combine,
                                ScanDirection direction = ScanDirection::forward,
                                WorkerPool* pool = nullptr, ScanStats* stats = nullptr) {
  if (elems.empty()) throw ModelError("associative_scan: empty input");
  if (direction == ScanDirection::forward) {
    return detail::scan_forward(std::move(elems), std::forward<Combine>(combine), pool,
                                stats);
  }
  std::reverse(elems.begin(), elems.end());
  auto flipped = [&combine](const T& a, const T& b) { return combine(b, a); };
  std::vector<T> out =
      detail::scan_forward(std::move(elems), flipped, pool, stats);
  std::reverse(out.begin(), out.end());
  return out;
}

/// Sequential left fold producing the same prefixes; reference route for the
/// scan and the engine used when instrumenting sequential baselines.
template <typename T, typename Combine>
std::vector<T> sequential_scan(std::vector<T> elems, Combine&& combine,
                               ScanDirection direction = ScanDirection::forward,
                               ScanStats* stats = nullptr) {
  if (elems.empty()) throw ModelError("sequential_scan: empty input");
  const std::size_t n = elems.size();
  std::vector<T> out(n);
  if (direction == ScanDirection::forward) {
    out[0] = elems[0];
    for (std::size_t i = 1; i < n; ++i) out[i] = combine(out[i - 1], elems[i]);
  } else {
    out[n - 1] = elems[n - 1];
    for (std::size_t i = n - 1; i >= 1; --i) out[i - 1] = combine(elems[i - 1], out[i]);
  }
  if (stats) {
    stats->combine_count = static_cast<std::int64_t>(n) - 1;
    stats->depth = static_cast<int>(n) - 1;
  }
  return out;
}

} // namespace srtm
