#ifndef PSCOM_PARALLEL_HPP
#define PSCOM_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

namespace pscom {

/// Result of evaluating one outer candidate (a beta sample or an eta vector).
struct CandidateScore {
  double score = 0.0;
  std::uint64_t iterations = 0;
  bool feasible = false;
};

struct BestCandidate {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t index = npos;
  double score = 0.0;
  std::uint64_t iterations_total = 0;

  bool found() const { return index != npos; }
};

/// Parallelism degree: explicit value if nonzero, else PSCOM_JOBS, else 1.
unsigned resolve_jobs(unsigned requested);

/// Evaluates candidates [0, count) and keeps the best feasible one. Ties go to
/// the smaller index. Threads own contiguous chunks and chunk winners are
/// merged in index order, so the result does not depend on `jobs`.
template <typename Eval>
BestCandidate reduce_best(std::size_t count, unsigned jobs, Eval&& eval) {
  auto run_chunk = [&](std::size_t begin, std::size_t end) {
    BestCandidate best;
    for (std::size_t i = begin; i < end; ++i) {
      const CandidateScore c = eval(i);
      best.iterations_total += c.iterations;
      if (c.feasible && (!best.found() || c.score > best.score)) {
        best.index = i;
        best.score = c.score;
      }
    }
    return best;
  };

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) return run_chunk(0, count);

  std::vector<BestCandidate> partial(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    threads.emplace_back([&, w, begin, end] { partial[w] = run_chunk(begin, end); });
  }
  for (auto& t : threads) t.join();

  BestCandidate best;
  for (const BestCandidate& p : partial) {
    best.iterations_total += p.iterations_total;
    if (p.found() && (!best.found() || p.score > best.score)) {
      best.index = p.index;
      best.score = p.score;
    }
  }
  return best;
}

}  // namespace pscom

#endif  // PSCOM_PARALLEL_HPP
