#include "srtm/parallel.hpp"

#include "srtm/errors.hpp"

namespace srtm {

WorkerPool::WorkerPool(int workers) : workers_(workers) {
  if (workers < 1) throw ModelError("worker count must be >= 1");
  threads_.reserve(workers - 1);
  for (int i = 1; i < workers; ++i) {
    threads_.emplace_back([this, i] { worker_loop(i); });
  }
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::run_chunk(int chunk_index) {
  const std::size_t per = (job_size_ + workers_ - 1) / workers_;
  const std::size_t begin = std::min(job_size_, chunk_index * per);
  const std::size_t end = std::min(job_size_, begin + per);
  if (begin >= end) return;
  (*job_fn_)(begin, end);
}

void WorkerPool::worker_loop(int index) {
  std::uint64_t seen = 0;
  for (;;) {
    {
      std::unique_lock lock(mutex_);
      start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
    }
    std::exception_ptr error;
    try {
      run_chunk(index);
    } catch (...) {
      error = std::current_exception();
    }
    {
      std::lock_guard lock(mutex_);
      if (error && !first_error_) first_error_ = error;
      if (--pending_ == 0) done_cv_.notify_all();
    }
  }
}

void WorkerPool::parallel_for(std::size_t n,
                              const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (workers_ == 1 || n == 1) {
    fn(0, n);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    job_size_ = n;
    job_fn_ = &fn;
    first_error_ = nullptr;
    pending_ = workers_ - 1;
    ++generation_;
  }
  start_cv_.notify_all();

  std::exception_ptr error;
  try {
    run_chunk(0);
  } catch (...) {
    error = std::current_exception();
  }
  std::unique_lock lock(mutex_);
  done_cv_.wait(lock, [&] { return pending_ == 0; });
  job_fn_ = nullptr;
  if (!first_error_ && error) first_error_ = error;
  if (first_error_) std::rethrow_exception(first_error_);
}

} // namespace srtm
