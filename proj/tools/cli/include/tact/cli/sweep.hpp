#pragma once

// Ordered parallel map: tasks run on up to `workers` threads, results reach the
// sink strictly in index order on the calling thread.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace tact::cli {

using Row = std::vector<std::string>;
using RowTask = std::function<Row(std::size_t index)>;
using RowSink = std::function<void(std::size_t index, const Row& row)>;

struct SweepOutcome {
  std::size_t rows_written = 0;
  bool complete = true;
  std::size_t failed_index = 0;
  std::string failure;  // what() of the first failing task
};

// A task that throws stops dispatch of further indices. Tasks already running are
// drained, and only the contiguous prefix before the first failure reaches the sink.
SweepOutcome run_sweep(std::size_t count, const RowTask& task, int workers, const RowSink& sink);

}  // namespace tact::cli
