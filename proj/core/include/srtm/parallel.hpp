#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace srtm {

/// Fixed pool of worker threads executing index ranges. parallel_for blocks
/// until every chunk has finished, giving the level-synchronous barriers the
/// scan relies on. Work is split into one contiguous chunk per worker, so the
/// set of operations (and therefore the floating-point results) is identical
/// for every worker count.
class WorkerPool {
public:
  /// workers >= 1; the calling thread acts as worker 0, so `workers - 1`
  /// threads are spawned.
  explicit WorkerPool(int workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int worker_count() const { return workers_; }

  /// Runs fn(begin, end) over a partition of [0, n). Exceptions thrown by any
  /// chunk are rethrown here (first one wins).
  void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

private:
  void worker_loop(int index);
  void run_chunk(int chunk_index);

  int workers_;
  std::vector<std::thread> threads_;

  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  std::uint64_t generation_ = 0;
  int pending_ = 0;
  bool stop_ = false;

  std::size_t job_size_ = 0;
  const std::function<void(std::size_t, std::size_t)>* job_fn_ = nullptr;
  std::exception_ptr first_error_;
};

} // namespace srtm
