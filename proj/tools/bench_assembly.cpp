// Timing comparison of the OpenMP element kernel against the serial
// reference on the presets that matter: straight (cheap coefficients) and
// bent (complex powers at every quadrature point).

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>

#include "wavepml/assembly.hpp"

using namespace wavepml;
using clock_type = std::chrono::steady_clock;

namespace {

double time_assembly(const Mesh& mesh, const MetricField& field,
                     const PmlSpec& spec, bool parallel, int reps,
                     double* checksum) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = clock_type::now();
    AssembledSystem sys = parallel
                              ? assemble_system(mesh, field, spec, 20.0)
                              : assemble_system_serial(mesh, field, spec, 20.0);
    auto t1 = clock_type::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    double acc = 0.0;
    for (const cplx& v : sys.A.values()) acc += std::abs(v);
    *checksum = acc;
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  double R = argc > 1 ? std::stod(argv[1]) : 14.0;
  int nppu = argc > 2 ? std::stoi(argv[2]) : 40;
  int ny = argc > 3 ? std::stoi(argv[3]) : 80;
  int reps = argc > 4 ? std::stoi(argv[4]) : 3;

  Mesh mesh = build_mesh(R, nppu, ny, 1.0);
  PmlSpec spec(6.0, 2.0, cplx(0.0, 0.4));
  std::printf("mesh %d x %d (%d nodes), %d thread(s), best of %d\n", mesh.nx,
              mesh.ny, mesh.n_nodes(), omp_get_max_threads(), reps);
  std::printf("%-10s %12s %12s %9s %10s\n", "preset", "serial [s]", "openmp [s]",
              "speedup", "max |diff|");

  CrossSection cs = CrossSection::make_flat(1.0);
  struct Row {
    const char* name;
    MetricField field;
  } rows[] = {
      {"straight", MetricField::straight(cs)},
      {"bent", MetricField::bent(cs, 1.0, 0.5, -1.0)},
      {"stretched", MetricField::stretched(cs)},
  };
  for (const Row& row : rows) {
    double chk_s = 0.0, chk_p = 0.0;
    double ts = time_assembly(mesh, row.field, spec, false, reps, &chk_s);
    double tp = time_assembly(mesh, row.field, spec, true, reps, &chk_p);

    AssembledSystem a = assemble_system_serial(mesh, row.field, spec, 20.0);
    AssembledSystem b = assemble_system(mesh, row.field, spec, 20.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.A.values().size(); ++i)
      worst = std::max(worst, std::abs(a.A.values()[i] - b.A.values()[i]));

    std::printf("%-10s %12.4f %12.4f %8.2fx %10.2e\n", row.name, ts, tp,
                ts / tp, worst);
  }
  return 0;
}
