#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace tariff {

// Scheduling horizon: 24 hourly slots, slot 0 = 8AM-9AM.
inline constexpr int kSlots = 24;
inline constexpr int kDayStartHour = 8;

// Hourly retail prices in cents/kWh; the upper-level decision variable.
using PriceVector = std::vector<double>;

// Prices live on a 0.01-cent grid; schedulers compare them as integer
// hundredths of a cent so tie detection and oracle equality are exact.
inline std::int64_t to_hundredths(double cents) { return std::llround(cents * 100.0); }

inline std::vector<std::int64_t> to_hundredths(const PriceVector& p) {
  std::vector<std::int64_t> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = to_hundredths(p[i]);
  return out;
}

// Wall-clock hour -> slot index of the 8AM-start day. Windows that wrap
// midnight (e.g. 7PM-7AM) stay contiguous under this mapping.
inline int slot_of_hour(int hour) { return ((hour - kDayStartHour) % 24 + 24) % 24; }

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic RNG. splitmix64 core with explicit bit-to-double conversion,
// so sequences are reproducible independent of the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = ~0ULL - ~0ULL % n;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  int uniform_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool bernoulli(double p) { return next_double() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[next_below(i)]);
    }
  }

  // Independent child stream; stable under the parent's later use.
  Rng child(std::uint64_t stream) const {
    Rng c(state_ ^ (0x6a09e667f3bcc909ULL + stream * 0x3c6ef372fe94f82bULL));
    c.next_u64();
    return c;
  }

 private:
  std::uint64_t state_;
};

// Runs fn(i) for i in [0, n) across `jobs` threads (0 = hardware default).
// Callers must not rely on execution order. The first worker exception is
// rethrown on the calling thread.
inline void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs) : std::thread::hardware_concurrency();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error;
  std::mutex error_mutex;
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn, &error, &error_mutex] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InputError(msg);
}

}  // namespace tariff
