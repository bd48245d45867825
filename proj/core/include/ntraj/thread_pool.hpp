#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ntraj {

/// Minimal persistent worker pool for data-parallel loops. Work items write
/// to disjoint outputs and any cross-item reduction is performed by the
/// caller in index order, so results are bit-identical for any worker count.
class ThreadPool {
  public:
    explicit ThreadPool(std::size_t workers);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    std::size_t worker_count() const { return workers_.size(); }

    /// Runs fn(i) for i in [0, count). Blocks until all items finish.
    /// Executes inline when the pool is empty or the range is tiny.
    void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

    /// Shared pool sized from hardware_concurrency; `threads` overrides the
    /// size on first use (0 keeps the default).
    static ThreadPool& shared(std::size_t threads = 0);

  private:
    struct Task {
        const std::function<void(std::size_t)>* fn = nullptr;
        std::size_t count = 0;
        std::size_t next = 0;
        std::size_t active = 0;
        bool done = false;
    };

    void worker_loop();

    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable finished_;
    Task* current_ = nullptr;
    bool stop_ = false;
};

}  // namespace ntraj
