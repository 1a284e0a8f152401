// Times pairwise_matrix_serial against the OpenMP pairwise_matrix on the
// synthetic drift corpus and checks the outputs are bitwise equal.
//
//   bench_pairwise [items] [workers]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "support.hpp"
#include "tsed/cooccur.hpp"
#include "tsed/parallel.hpp"

using namespace tsed;

namespace {

template <class F>
double seconds(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 1500;
  const int workers = resolve_workers(argc > 2 ? std::atoi(argv[2]) : 0);

  testing::DriftOptions drift;
  drift.tweets_per_account = (n + 2 * drift.accounts_per_class - 1) / (2 * drift.accounts_per_class);
  const auto records = testing::make_drift_records(drift);
  const auto vocab = build_vocabulary(records, 3);
  auto items = materialize(records, vocab).items;
  items.resize(std::min(items.size(), n));
  const auto matrix = build_cooccurrence(items, vocab.size());

  std::printf("%zu x %zu items, %d worker(s)\n", items.size(), items.size(), workers);
  std::printf("%-8s %10s %10s %8s %s\n", "metric", "serial s", "parallel s", "speedup", "equal");
  bool all_equal = true;
  for (BaseMetric base : {BaseMetric::ED, BaseMetric::SED, BaseMetric::Cosine}) {
    const DistanceSpec spec{base, 0.01, &matrix};
    DistanceMatrix serial, parallel;
    const double ts = seconds([&] { serial = pairwise_matrix_serial(items, items, spec); });
    const double tp = seconds([&] { parallel = pairwise_matrix(items, items, spec, workers); });
    const bool equal = serial.values == parallel.values;
    all_equal = all_equal && equal;
    std::printf("%-8s %10.3f %10.3f %8.2f %s\n", std::string(to_string(base)).c_str(), ts, tp, ts / tp,
                equal ? "yes" : "NO");
  }
  return all_equal ? 0 : 1;
}
