#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "annulus/parallel.hpp"

using namespace annulus;

TEST(ParallelFor, EachIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, SameResultForAnyThreadCount) {
  auto run = [](int threads) {
    std::vector<double> slots(257);
    parallel_for(slots.size(), threads, [&](std::size_t i) { slots[i] = 1.0 / (1.0 + i); });
    double sum = 0.0;
    for (double s : slots) sum += s;
    return sum;
  };
  const double one = run(1);
  EXPECT_EQ(run(3), one);
  EXPECT_EQ(run(16), one);
}

TEST(ParallelFor, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 37) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(ParallelFor, EmptyRange) {
  int calls = 0;
  parallel_for(0, 4, [&](std::size_t) { ++calls; });
  EXPECT_EQ(calls, 0);
}

TEST(ThreadCount, EnvironmentCap) {
  ::setenv("ANNULUS_SPECTRA_THREADS", "3", 1);
  EXPECT_EQ(default_thread_count(), 3);
  ::setenv("ANNULUS_SPECTRA_THREADS", "zero", 1);
  EXPECT_GE(default_thread_count(), 1);
  ::unsetenv("ANNULUS_SPECTRA_THREADS");
  EXPECT_GE(default_thread_count(), 1);
}
