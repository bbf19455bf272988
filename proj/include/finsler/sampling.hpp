#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <span>

#include "finsler/chart.hpp"

namespace finsler {

/// Independent deterministic random stream for sample `index` of a run seeded
/// with `seed`. Results never depend on how samples are spread over threads.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index);

  double uniform(double lo, double hi);
  double normal();

 private:
  std::mt19937_64 engine_;
};

constexpr int kMaxRejections = 1000;

/// Rejection-samples the chart's sample box against its domain predicate.
/// Throws DomainEmpty after kMaxRejections consecutive misses.
Vector sample_point(const Chart& chart, SampleStream& rng);

/// Random unit-norm Euclidean direction that avoids the structure's
/// non-smooth axis cone.
Vector sample_direction(const FinslerStructure& F, SampleStream& rng);

LineElement sample_line_element(const FinslerStructure& F, SampleStream& rng);

/// Number of worker threads: FINSLER_THREADS when set, else the hardware count.
int worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads and
/// rethrows the first exception raised by any call.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace finsler
