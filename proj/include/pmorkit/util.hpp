#pragma once

#include <chrono>
#include <ctime>
#include <functional>

namespace pmk {

class WallTimer {
 public:
  WallTimer() : start_(clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_;
};

/// CPU time of the calling thread; stable under concurrent evaluations.
class ThreadCpuTimer {
 public:
  ThreadCpuTimer() : start_(now()) {}
  double seconds() const { return now() - start_; }

 private:
  static double now() {
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
  }
  double start_;
};

/// Number of worker threads for embarrassingly parallel sweeps and Jacobian
/// columns; capped by the PMORKIT_THREADS environment variable.
int max_threads();

/// Runs fn(i) for i in [0, count) on up to max_threads() threads. Exceptions
/// are captured and the first one is rethrown after all tasks finish.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace pmk
