// Compares the serial and OpenMP sweep paths on the same workload and checks
// they produce identical results.

#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
static double omp_get_wtime() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}
static int omp_get_max_threads() { return 1; }
#endif

#include "echosim/experiments.hpp"
#include "echosim/runner.hpp"

int main(int argc, char** argv) {
  std::size_t seeds = 2000;
  if (argc > 1) seeds = static_cast<std::size_t>(std::stoull(argv[1]));

  const echosim::ScenarioConfig cfg = echosim::baseline_attack_scenario(1);

  double t0 = omp_get_wtime();
  const auto serial = echosim::run_sweep(cfg, 1, seeds, false);
  const double serial_s = omp_get_wtime() - t0;

  t0 = omp_get_wtime();
  const auto parallel = echosim::run_sweep(cfg, 1, seeds, true);
  const double parallel_s = omp_get_wtime() - t0;

  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i)
    identical = serial[i].seed == parallel[i].seed && serial[i].verdicts == parallel[i].verdicts;

  std::printf("# sweep of %zu seeds, %d thread(s)\n", seeds, omp_get_max_threads());
  std::printf("# serial   : %8.3f s  (%8.1f runs/s)\n", serial_s,
              static_cast<double>(seeds) / serial_s);
  std::printf("# parallel : %8.3f s  (%8.1f runs/s, speedup %.2fx)\n", parallel_s,
              static_cast<double>(seeds) / parallel_s, serial_s / parallel_s);
  std::printf("# results identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
