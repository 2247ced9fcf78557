// Benchmark of the parallel kernels against their serial reference
// implementations: the bootstrap replicate loop and the Monte Carlo
// replication loop. Both pairs must produce identical numbers; the
// benchmark reports wall times and verifies the agreement.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ciftest/bootstrap.hpp"
#include "ciftest/rng.hpp"
#include "ciftest/simulation.hpp"

using namespace ciftest;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename F>
double timed(F&& fn) {
  const double start = now_seconds();
  fn();
  return now_seconds() - start;
}

}  // namespace

int main() {
#ifdef _OPENMP
  const int hw_threads = omp_get_max_threads();
#else
  const int hw_threads = 1;
#endif
  std::printf("worker threads for the parallel runs: %d\n\n", hw_threads);

  // Bootstrap replicate loop on one large dataset.
  {
    ScenarioConfig config = make_scenario(2, Hypothesis::h1);
    config.n1 = config.n2 = 400;
    Xoshiro256pp rng(20240601);
    const TwoSampleData data = simulate_dataset(config, rng);
    const Window w{0.0, 1.5};
    const MultiplierSpec spec{MultiplierFamily::poisson, true};
    const int B = 4000;

    std::vector<double> serial_reps, parallel_reps;
    const double t_serial = timed([&] {
      serial_reps = bootstrap_replicates(data, w, StatKind::abc, spec, false, B,
                                         7, /*threads=*/1);
    });
    const double t_parallel = timed([&] {
      parallel_reps = bootstrap_replicates(data, w, StatKind::abc, spec, false, B,
                                           7, /*threads=*/0);
    });
    std::printf("bootstrap replicates (n = 800, B = %d)\n", B);
    std::printf("  serial reference: %7.3f s\n", t_serial);
    std::printf("  openmp kernel:    %7.3f s   speedup %.2fx, identical: %s\n\n",
                t_parallel, t_serial / t_parallel,
                serial_reps == parallel_reps ? "yes" : "NO");
  }

  // Monte Carlo replication loop over a full simulation cell.
  {
    ScenarioConfig config = make_scenario(2, Hypothesis::h0);
    config.n1 = config.n2 = 100;
    config.n_sim = 200;
    config.B = 300;
    config.seed = 99;
    config.roster = {parse_test_spec("abc:poisson:corrected"),
                     parse_test_spec("ks:poisson:corrected"),
                     parse_test_spec("cvm:poisson:corrected")};

    RejectionTable serial_table, parallel_table;
    const double t_serial =
        timed([&] { serial_table = monte_carlo_rejection_rates(config, 1); });
    const double t_parallel =
        timed([&] { parallel_table = monte_carlo_rejection_rates(config, 0); });
    bool identical = true;
    for (std::size_t i = 0; i < serial_table.tests.size(); ++i) {
      identical &= serial_table.tests[i].rejects == parallel_table.tests[i].rejects;
    }
    std::printf("simulation cell (n = 200, n_sim = %d, B = %d, 3 tests)\n",
                config.n_sim, config.B);
    std::printf("  serial reference: %7.3f s\n", t_serial);
    std::printf("  openmp kernel:    %7.3f s   speedup %.2fx, identical: %s\n",
                t_parallel, t_serial / t_parallel, identical ? "yes" : "NO");
  }
  return 0;
}
