#include "tsed/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef TSED_HAVE_OPENMP
#include <omp.h>
#endif

namespace tsed {

int resolve_workers(int requested) {
#ifdef TSED_HAVE_OPENMP
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
      // fall through to the OpenMP default
    }
  }
  return omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

DistanceMatrix pairwise_matrix_serial(std::span<const TraceItem> a, std::span<const TraceItem> b,
                                      const DistanceSpec& spec) {
  DistanceMatrix m{a.size(), b.size(), std::vector<double>(a.size() * b.size())};
  DistanceKernel kernel(spec);
  for (std::size_t p = 0; p < a.size(); ++p) {
    for (std::size_t q = 0; q < b.size(); ++q) m(p, q) = kernel(a[p], b[q]);
  }
  return m;
}

DistanceMatrix pairwise_matrix(std::span<const TraceItem> a, std::span<const TraceItem> b,
                               const DistanceSpec& spec, int workers) {
  spec.validate();
  DistanceMatrix m{a.size(), b.size(), std::vector<double>(a.size() * b.size())};
  const auto rows = static_cast<std::ptrdiff_t>(a.size());
  [[maybe_unused]] const int threads = resolve_workers(workers);

  // Every entry is a pure function of its pair, so any row partition yields
  // the same bits; the per-thread kernel only carries caches.
#pragma omp parallel num_threads(threads)
  {
    DistanceKernel kernel(spec);
#pragma omp for schedule(dynamic, 4)
    for (std::ptrdiff_t p = 0; p < rows; ++p) {
      const auto row = static_cast<std::size_t>(p);
      for (std::size_t q = 0; q < b.size(); ++q) m(row, q) = kernel(a[row], b[q]);
    }
  }
  return m;
}

}  // namespace tsed
