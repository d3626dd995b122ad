#include "tact/cli/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace tact::cli {

SweepOutcome run_sweep(std::size_t count, const RowTask& task, int workers, const RowSink& sink) {
  SweepOutcome outcome;
  if (count == 0) return outcome;

  std::vector<std::optional<Row>> slots(count);
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::size_t first_failure = count;
  std::string failure;
  std::size_t finished = 0;  // tasks that stored a row or failed

  const auto worker = [&] {
    for (;;) {
      if (stop.load()) return;
      const std::size_t index = next.fetch_add(1);
      if (index >= count) return;
      std::optional<Row> row;
      std::string error;
      try {
        row = task(index);
      } catch (const std::exception& e) {
        error = e.what();
      } catch (...) {
        error = "unknown exception";
      }
      std::lock_guard lock(mutex);
      if (row) {
        slots[index] = std::move(row);
      } else {
        stop.store(true);
        if (index < first_failure) {
          first_failure = index;
          failure = error;
        }
      }
      ++finished;
      ready.notify_all();
    }
  };

  const std::size_t n_threads = std::clamp<std::size_t>(workers < 1 ? 1 : workers, 1, count);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);

  std::size_t cursor = 0;
  {
    std::unique_lock lock(mutex);
    while (cursor < count) {
      ready.wait(lock, [&] { return slots[cursor].has_value() || first_failure <= cursor || stop.load(); });
      if (slots[cursor]) {
        Row row = std::move(*slots[cursor]);
        slots[cursor].reset();
        lock.unlock();
        sink(cursor, row);
        lock.lock();
        ++cursor;
        continue;
      }
      if (first_failure <= cursor) break;
      // Stopped by a later failure: wait until every dispatched task has settled.
      ready.wait(lock, [&] { return finished >= std::min(next.load(), count) || slots[cursor].has_value(); });
      if (!slots[cursor] && finished >= std::min(next.load(), count)) break;
    }
  }
  for (auto& t : pool) t.join();

  // Everything dispatched has finished; flush the contiguous prefix that is left.
  while (cursor < count && slots[cursor]) {
    sink(cursor, *slots[cursor]);
    ++cursor;
  }
  outcome.rows_written = cursor;
  if (cursor < count) {
    outcome.complete = false;
    outcome.failed_index = first_failure;
    outcome.failure = failure;
  }
  return outcome;
}

}  // namespace tact::cli
