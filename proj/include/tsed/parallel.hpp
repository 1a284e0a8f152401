#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tsed/corpus.hpp"
#include "tsed/distance.hpp"

namespace tsed {

/// Environment variable consulted for the default worker count.
inline constexpr const char* kWorkersEnv = "TSED_WORKERS";

/// `requested` if positive, else $TSED_WORKERS, else the OpenMP default.
/// Always 1 when built without OpenMP.
int resolve_workers(int requested = 0);

struct DistanceMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major

  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
};

/// M(p, q) = D(a_p, b_q) under `spec`, rows split across workers.
/// The output is identical for every worker count.
DistanceMatrix pairwise_matrix(std::span<const TraceItem> a, std::span<const TraceItem> b,
                               const DistanceSpec& spec, int workers = 0);

/// Single-threaded reference for pairwise_matrix.
DistanceMatrix pairwise_matrix_serial(std::span<const TraceItem> a, std::span<const TraceItem> b,
                                      const DistanceSpec& spec);

}  // namespace tsed
