#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace ggarray {

// Fixed set of worker threads used for shard- and range-parallel phases.
// The calling thread takes part in every parallel_for, so a pool of size 1
// runs everything inline.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers = 1);
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;
  ~WorkerPool();

  std::size_t size() const noexcept { return threads_.size() + 1; }

  // Runs task(i) for every i in [0, n) and returns once all calls finished.
  // If any call throws, the first exception is rethrown after the join.
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

 private:
  void worker_loop();
  void drain();

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  std::size_t generation_ = 0;
  std::size_t busy_ = 0;
  bool stopping_ = false;

  const std::function<void(std::size_t)>* task_ = nullptr;
  std::size_t task_count_ = 0;
  std::atomic<std::size_t> next_{0};
  std::exception_ptr error_;
};

}  // namespace ggarray
