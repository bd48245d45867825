#include "ntraj/thread_pool.hpp"

#include <algorithm>

namespace ntraj {

ThreadPool::ThreadPool(std::size_t workers) {
    workers_.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) {
        workers_.emplace_back([this] { worker_loop(); });
    }
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : workers_) t.join();
}

void ThreadPool::worker_loop() {
    std::unique_lock lock(mutex_);
    while (true) {
        wake_.wait(lock, [this] { return stop_ || (current_ && current_->next < current_->count); });
        if (stop_) return;
        Task* task = current_;
        while (task->next < task->count) {
            const std::size_t i = task->next++;
            ++task->active;
            lock.unlock();
            (*task->fn)(i);
            lock.lock();
            --task->active;
        }
        if (task->active == 0 && !task->done) {
            task->done = true;
            finished_.notify_all();
        }
    }
}

void ThreadPool::parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    if (workers_.empty() || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    Task task;
    task.fn = &fn;
    task.count = count;
    {
        std::lock_guard lock(mutex_);
        current_ = &task;
    }
    wake_.notify_all();
    // The calling thread participates too.
    {
        std::unique_lock lock(mutex_);
        while (task.next < task.count) {
            const std::size_t i = task.next++;
            ++task.active;
            lock.unlock();
            fn(i);
            lock.lock();
            --task.active;
        }
        finished_.wait(lock, [&task] { return task.next >= task.count && task.active == 0; });
        current_ = nullptr;
    }
}

ThreadPool& ThreadPool::shared(std::size_t threads) {
    static ThreadPool pool(threads > 0 ? threads - 1
                                       : std::max(1u, std::thread::hardware_concurrency()) - 1);
    return pool;
}

}  // namespace ntraj
