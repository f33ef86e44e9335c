// Benchmark: serial vs OpenMP moment-weight audit kernels, checking that
// both modes agree bit-for-bit on the reported slack.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gitkit/sampling.hpp"
#include "gitkit/stability.hpp"

using namespace gitkit;

namespace {

CompactGroup preset_group(int which) {
  GroupSpec spec;
  switch (which) {
    case 0: {
      spec.preset = Preset::torus;
      spec.n = 2;
      spec.weights.resize(2, 1);
      spec.weights << 1, -1;
      break;
    }
    case 1: {
      spec.preset = Preset::torus;
      spec.n = 3;
      spec.weights.resize(3, 2);
      spec.weights << 1, 0, 0, 1, -1, 1;
      break;
    }
    case 2:
      spec.preset = Preset::full_unitary;
      spec.n = 2;
      break;
    default:
      spec.preset = Preset::full_unitary;
      spec.n = 3;
      break;
  }
  return build_group(spec);
}

const char* preset_name(int which) {
  switch (which) {
    case 0: return "u1-in-u2";
    case 1: return "t2-in-u3";
    case 2: return "u2";
    default: return "u3";
  }
}

double run_once(const ProjectivePoint& x, const CompactGroup& g, long samples,
                unsigned long long seed, AuditMode mode, AuditReport* out) {
  auto t0 = std::chrono::steady_clock::now();
  *out = moment_weight_audit(x, g, samples, seed, mode);
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  long samples = (argc > 1) ? std::atol(argv[1]) : 20000;
  unsigned long long seed = (argc > 2) ? std::strtoull(argv[2], nullptr, 10) : 1;
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-10s %10s %12s %12s %8s %s\n", "preset", "samples", "serial[s]", "parallel[s]",
              "speedup", "identical");
  for (int which = 0; which < 4; ++which) {
    CompactGroup g = preset_group(which);
    auto rng = sample_rng(seed, 7000 + which);
    ProjectivePoint x = random_point(g, rng);
    AuditReport serial_rep, par_rep;
    double ts = run_once(x, g, samples, seed, AuditMode::serial, &serial_rep);
    double tp = run_once(x, g, samples, seed, AuditMode::parallel, &par_rep);
    bool same = serial_rep.violations == par_rep.violations &&
                serial_rep.worst_slack == par_rep.worst_slack;
    std::printf("%-10s %10ld %12.4f %12.4f %8.2f %s\n", preset_name(which), samples, ts, tp,
                ts / tp, same ? "yes" : "NO");
    if (!same) return 1;
  }
  return 0;
}
