// Serial reference vs parallel kernels on hard Ising families.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "mml/graph.hpp"
#include "mml/ising.hpp"
#include "mml/kernels.hpp"
#include "mml/reference.hpp"

namespace {

double seconds(const std::function<double()>& f, double& sink, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) sink += f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  double sink = 0.0;
  std::printf("%-14s %4s %12s %12s %8s %12s\n", "kernel", "d", "serial_s", "parallel_s", "speedup", "abs_diff");
  for (int d : {16, 18, 20}) {
    const auto g = mml::standard_graph(mml::GraphKind::cycle, d);
    const auto fam = mml::make_hard_ising_family(g, 0.5 / std::sqrt(2.0 * g.edge_count()));
    const auto& p = fam.models[0];
    const auto& q = fam.models[1];
    const int reps = d <= 18 ? 3 : 1;

    struct Case {
      const char* name;
      std::function<double()> serial, parallel;
    };
    const Case cases[] = {
        {"log_partition", [&] { return mml::reference::log_partition(p); }, [&] {
           const auto e = mml::kernels::energies(mml::kernels::EnergyTerms::from(p.interactions(), p.field()));
           return mml::kernels::log_sum_exp(e);
         }},
        {"tv_exact", [&] { return mml::reference::tv_exact(p, q); }, [&] { return mml::tv_exact(p, q); }},
        {"kl_exact", [&] { return mml::reference::kl_exact(p, q); }, [&] { return mml::kl_exact(p, q); }},
        {"moment_k4", [&] { return mml::reference::quadratic_form_moment(p.interactions(), 4); },
         [&] { return mml::quadratic_form_moment(p.interactions(), 4); }},
    };
    for (const auto& c : cases) {
      const double diff = std::abs(c.serial() - c.parallel());
      const double ts = seconds(c.serial, sink, reps);
      const double tp = seconds(c.parallel, sink, reps);
      std::printf("%-14s %4d %12.5f %12.5f %8.2f %12.3e\n", c.name, d, ts, tp, ts / tp, diff);
    }
  }
  std::printf("threads=%d checksum=%.6g\n", mml::kernels::max_threads(), sink);
  return 0;
}
