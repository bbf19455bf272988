#include "finsler/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "finsler/error.hpp"

namespace finsler {

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x9e3779b9u};
  engine_.seed(seq);
}

double SampleStream::uniform(double lo, double hi) {
  // Built from raw engine output so reports are identical across standard libraries.
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double SampleStream::normal() {
  double u1 = 0.0;
  do {
    u1 = uniform(0.0, 1.0);
  } while (u1 <= 0.0);
  const double u2 = uniform(0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

Vector sample_point(const Chart& chart, SampleStream& rng) {
  Vector x(static_cast<std::size_t>(chart.dim));
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    for (int i = 0; i < chart.dim; ++i) {
      const auto [lo, hi] = chart.sample_box[static_cast<std::size_t>(i)];
      x[static_cast<std::size_t>(i)] = rng.uniform(lo, hi);
    }
    if (chart.contains(x)) return x;
  }
  throw Error(ErrorKind::DomainEmpty, "no point of chart '" + chart.label + "' accepted after " +
                                          std::to_string(kMaxRejections) + " draws");
}

Vector sample_direction(const FinslerStructure& F, SampleStream& rng) {
  Vector y(static_cast<std::size_t>(F.dim()));
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    double norm = 0.0;
    for (double& c : y) {
      c = rng.normal();
      norm += c * c;
    }
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;
    for (double& c : y) c /= norm;
    if (!F.near_nonsmooth_axis(y)) return y;
  }
  throw Error(ErrorKind::DomainEmpty, "could not draw a direction off the non-smooth axis");
}

LineElement sample_line_element(const FinslerStructure& F, SampleStream& rng) {
  LineElement le;
  le.x = sample_point(F.chart(), rng);
  le.y = sample_direction(F, rng);
  return le;
}

int worker_count() {
  if (const char* env = std::getenv("FINSLER_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace finsler
