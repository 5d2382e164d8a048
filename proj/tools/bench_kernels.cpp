// Timing comparison of the OpenMP-parallel table build and sweep evaluation
// against their serial counterparts, with a bitwise agreement check: every
// point is computed independently by identical code, so the parallel results
// must match the serial ones exactly (max |delta| = 0).

#include "qdet/qudit_algebra.hpp"
#include "qdet/response_integrals.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double max_table_delta(const qdet::ResponseIntegralTable& a,
                       const qdet::ResponseIntegralTable& b) {
  if (a.entries.size() != b.entries.size()) return 1.0;
  double delta = 0.0;
  auto ita = a.entries.begin();
  auto itb = b.entries.begin();
  for (; ita != a.entries.end(); ++ita, ++itb) {
    if (!(ita->first == itb->first)) return 1.0;
    delta = std::max(delta, std::abs(ita->second.value - itb->second.value));
  }
  return delta;
}

void bench_table(const qdet::DetectorModel& model,
                 const qdet::IntegralParams& params) {
  const auto t0 = Clock::now();
  const auto serial = qdet::build_table(model, params, qdet::TableBuild::Serial);
  const double serial_s = seconds_since(t0);

  const auto t1 = Clock::now();
  const auto parallel =
      qdet::build_table(model, params, qdet::TableBuild::Parallel);
  const double parallel_s = seconds_since(t1);

  std::printf(
      "table %-10s  %3zu keys  serial %8.3f ms  parallel %8.3f ms  "
      "speedup %5.2fx  max|delta| %g\n",
      model.label.c_str(), serial.entries.size(), 1e3 * serial_s,
      1e3 * parallel_s, serial_s / parallel_s,
      max_table_delta(serial, parallel));
}

void bench_sweep(const qdet::IntegralParams& base) {
  constexpr int kPoints = 32;
  std::vector<double> windows(kPoints);
  for (int k = 0; k < kPoints; ++k) windows[k] = 4.0 + 12.0 * k / (kPoints - 1);

  auto evaluate = [&base](double window) {
    qdet::IntegralParams p = base;
    p.worldline.switching_width = window;
    const double omega = 1.0;
    return qdet::integral_I(p, omega).value +
           qdet::integral_L(p, qdet::Sign::Plus, omega).value +
           qdet::integral_L(p, qdet::Sign::Minus, omega).value;
  };

  std::vector<std::complex<double>> serial(kPoints), parallel(kPoints);

  const auto t0 = Clock::now();
  for (int k = 0; k < kPoints; ++k) serial[static_cast<std::size_t>(k)] = evaluate(windows[static_cast<std::size_t>(k)]);
  const double serial_s = seconds_since(t0);

  const auto t1 = Clock::now();
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < kPoints; ++k) parallel[static_cast<std::size_t>(k)] = evaluate(windows[static_cast<std::size_t>(k)]);
  const double parallel_s = seconds_since(t1);

  double delta = 0.0;
  for (int k = 0; k < kPoints; ++k)
    delta = std::max(delta, std::abs(serial[static_cast<std::size_t>(k)] -
                                     parallel[static_cast<std::size_t>(k)]));

  std::printf(
      "sweep %d windows      serial %8.3f ms  parallel %8.3f ms  "
      "speedup %5.2fx  max|delta| %g\n",
      kPoints, 1e3 * serial_s, 1e3 * parallel_s, serial_s / parallel_s, delta);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled (serial build)\n");
#endif

  qdet::IntegralParams params;
  params.worldline.accel = 1.0;
  params.worldline.switching_width = 10.0;

  bench_table(qdet::build_su2_model(2.0, 1.0), params);
  bench_table(qdet::build_hw_model(5, 1.0), params);
  bench_sweep(params);
  return 0;
}
