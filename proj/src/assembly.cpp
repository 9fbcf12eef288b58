#include "wavepml/assembly.hpp"

#include <algorithm>
#include <cmath>

namespace wavepml {

double SourceSpec::support_halfwidth() const { return 4.0 / std::sqrt(gamma); }

bool SourceSpec::inside_physical_region(double r) const {
  return x0 + support_halfwidth() < r;
}

namespace {

struct QuadRule {
  std::vector<double> pts;  // on [-1, 1]
  std::vector<double> wts;
};

QuadRule gauss_rule(int n) {
  if (n == 2) {
    double g = 1.0 / std::sqrt(3.0);
    return {{-g, g}, {1.0, 1.0}};
  }
  if (n == 3) {
    double g = std::sqrt(0.6);
    return {{-g, 0.0, g}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
  }
  throw InvalidArgument("assembly supports 2 or 3 Gauss points per direction");
}

// corner order: (i,j), (i+1,j), (i+1,j+1), (i,j+1)
constexpr int kCornerDi[4] = {0, 1, 1, 0};
constexpr int kCornerDj[4] = {0, 0, 1, 1};

void shape_values(double xi, double eta, double N[4]) {
  N[0] = 0.25 * (1 - xi) * (1 - eta);
  N[1] = 0.25 * (1 + xi) * (1 - eta);
  N[2] = 0.25 * (1 + xi) * (1 + eta);
  N[3] = 0.25 * (1 - xi) * (1 + eta);
}

void shape_grads(double xi, double eta, double hx, double hy, double dNdx[4],
                 double dNdy[4]) {
  const double sx = 2.0 / hx, sy = 2.0 / hy;
  dNdx[0] = -0.25 * (1 - eta) * sx;
  dNdx[1] = 0.25 * (1 - eta) * sx;
  dNdx[2] = 0.25 * (1 + eta) * sx;
  dNdx[3] = -0.25 * (1 + eta) * sx;
  dNdy[0] = -0.25 * (1 - xi) * sy;
  dNdy[1] = -0.25 * (1 + xi) * sy;
  dNdy[2] = 0.25 * (1 + xi) * sy;
  dNdy[3] = 0.25 * (1 - xi) * sy;
}

struct LocalWork {
  std::array<cplx, 16> A;      // local bilinear matrix
  std::array<cplx, 9> sqrtdet; // per quadrature point (quad_points^2)
};

// Local matrix of one element; identical code path for the serial and
// parallel assemblies so their results agree bitwise.
LocalWork element_matrix(const Mesh& mesh, const MetricField& field,
                         const PmlSpec& spec, double mu0, int ei, int ej,
                         const QuadRule& q) {
  LocalWork w{};
  const double hx = mesh.hx(), hy = mesh.hy();
  const double x0 = mesh.x(ei), y0 = mesh.y(ej);
  const double jac = hx * hy / 4.0;
  int qp = 0;
  for (std::size_t a = 0; a < q.pts.size(); ++a) {
    for (std::size_t b = 0; b < q.pts.size(); ++b, ++qp) {
      double xi = q.pts[a], eta = q.pts[b];
      double wq = q.wts[a] * q.wts[b] * jac;
      double xq = x0 + hx * (xi + 1.0) / 2.0;
      double yq = y0 + hy * (eta + 1.0) / 2.0;
      DeformedSample g = deformed_metric(field, spec, xq, yq);
      w.sqrtdet[qp] = g.sqrt_det;
      double N[4], dNdx[4], dNdy[4];
      shape_values(xi, eta, N);
      shape_grads(xi, eta, hx, hy, dNdx, dNdy);
      cplx c00 = g.sqrt_det * g.inv00 * wq;
      cplx c01 = g.sqrt_det * g.inv01 * wq;
      cplx c11 = g.sqrt_det * g.inv11 * wq;
      cplx cm = g.sqrt_det * mu0 * wq;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          w.A[r * 4 + c] += c00 * dNdx[r] * dNdx[c] +
                            c01 * (dNdx[r] * dNdy[c] + dNdy[r] * dNdx[c]) +
                            c11 * dNdy[r] * dNdy[c] - cm * N[r] * N[c];
    }
  }
  return w;
}

struct Pattern {
  std::vector<int> row_ptr, col;
  std::vector<int> free_of_node, node_of_free;
  int free_count = 0;
};

Pattern build_pattern(const Mesh& mesh, bool eliminate) {
  Pattern p;
  const int nn = mesh.n_nodes();
  p.free_of_node.assign(nn, -1);
  for (int id = 0; id < nn; ++id) {
    if (eliminate && mesh.is_dirichlet(id)) continue;
    p.free_of_node[id] = p.free_count++;
    p.node_of_free.push_back(id);
  }
  p.row_ptr.assign(p.free_count + 1, 0);
  auto neighbors = [&](int id, auto&& fn) {
    int i = id / (mesh.ny + 1), j = id % (mesh.ny + 1);
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        int ii = i + di, jj = j + dj;
        if (ii < 0 || ii > mesh.nx || jj < 0 || jj > mesh.ny) continue;
        int nb = p.free_of_node[mesh.node(ii, jj)];
        if (nb >= 0) fn(nb);
      }
  };
  for (int f = 0; f < p.free_count; ++f) {
    int cnt = 0;
    neighbors(p.node_of_free[f], [&](int) { ++cnt; });
    p.row_ptr[f + 1] = cnt;
  }
  for (int f = 0; f < p.free_count; ++f) p.row_ptr[f + 1] += p.row_ptr[f];
  p.col.resize(p.row_ptr.back());
  for (int f = 0; f < p.free_count; ++f) {
    int at = p.row_ptr[f];
    neighbors(p.node_of_free[f], [&](int nb) { p.col[at++] = nb; });
    std::sort(p.col.begin() + p.row_ptr[f], p.col.begin() + p.row_ptr[f + 1]);
  }
  return p;
}

AssembledSystem assemble_impl(const Mesh& mesh, const MetricField& field,
                              const PmlSpec& spec, double mu0,
                              const AssemblyOptions& opts) {
  LambdaCheck chk = validate_lambda(spec.lambda, spec.alpha);
  if (!chk.ok) throw InvalidArgument("assemble: " + chk.message);

  const QuadRule q = gauss_rule(opts.quad_points);
  const int nqp = opts.quad_points * opts.quad_points;
  const int ne = mesh.n_elements();
  Pattern pat = build_pattern(mesh, opts.eliminate_dirichlet);

  // phase 1: per-element local matrices, embarrassingly parallel
  std::vector<LocalWork> local(ne);
#pragma omp parallel for schedule(static) if (opts.parallel)
  for (int e = 0; e < ne; ++e) {
    int ei = e / mesh.ny, ej = e % mesh.ny;
    local[e] = element_matrix(mesh, field, spec, mu0, ei, ej, q);
  }

  // phase 2: per-row scatter in ascending element order; the accumulation
  // order per entry is independent of the thread count
  std::vector<cplx> val(pat.col.size(), cplx(0.0));
#pragma omp parallel for schedule(static) if (opts.parallel)
  for (int f = 0; f < pat.free_count; ++f) {
    int id = pat.node_of_free[f];
    int i = id / (mesh.ny + 1), j = id % (mesh.ny + 1);
    for (int ei = i - 1; ei <= i; ++ei) {
      for (int ej = j - 1; ej <= j; ++ej) {
        if (ei < 0 || ei >= mesh.nx || ej < 0 || ej >= mesh.ny) continue;
        const LocalWork& lw = local[ei * mesh.ny + ej];
        int a = -1;
        for (int c = 0; c < 4; ++c)
          if (ei + kCornerDi[c] == i && ej + kCornerDj[c] == j) a = c;
        for (int c = 0; c < 4; ++c) {
          int nb = pat.free_of_node[mesh.node(ei + kCornerDi[c],
                                              ej + kCornerDj[c])];
          if (nb < 0) continue;
          auto lo = pat.col.begin() + pat.row_ptr[f];
          auto hi = pat.col.begin() + pat.row_ptr[f + 1];
          auto it = std::lower_bound(lo, hi, nb);
          val[it - pat.col.begin()] += lw.A[a * 4 + c];
        }
      }
    }
  }

  AssembledSystem sys;
  sys.mesh = mesh;
  sys.mu0 = mu0;
  sys.free_count = pat.free_count;
  sys.free_of_node = std::move(pat.free_of_node);
  sys.node_of_free = std::move(pat.node_of_free);
  sys.quad_points = opts.quad_points;
  sys.mass_weight.resize(static_cast<std::size_t>(ne) * nqp);
  for (int e = 0; e < ne; ++e)
    for (int k = 0; k < nqp; ++k)
      sys.mass_weight[static_cast<std::size_t>(e) * nqp + k] =
          local[e].sqrtdet[k];
  sys.A = ComplexSparse(pat.free_count, std::move(pat.row_ptr),
                        std::move(pat.col), std::move(val), true);
  return sys;
}

}  // namespace

AssembledSystem assemble_system(const Mesh& mesh, const MetricField& field,
                                const PmlSpec& spec, double mu0,
                                const AssemblyOptions& opts) {
  return assemble_impl(mesh, field, spec, mu0, opts);
}

// Plain element-by-element scatter. Kept as an independent reference for
// the two-phase kernel; both visit the elements of any matrix entry in
// ascending order, so the sums agree bitwise.
AssembledSystem assemble_system_serial(const Mesh& mesh,
                                       const MetricField& field,
                                       const PmlSpec& spec, double mu0,
                                       AssemblyOptions opts) {
  LambdaCheck chk = validate_lambda(spec.lambda, spec.alpha);
  if (!chk.ok) throw InvalidArgument("assemble: " + chk.message);

  const QuadRule q = gauss_rule(opts.quad_points);
  const int nqp = opts.quad_points * opts.quad_points;
  Pattern pat = build_pattern(mesh, opts.eliminate_dirichlet);
  std::vector<cplx> val(pat.col.size(), cplx(0.0));

  AssembledSystem sys;
  sys.mesh = mesh;
  sys.mu0 = mu0;
  sys.free_count = pat.free_count;
  sys.quad_points = opts.quad_points;
  sys.mass_weight.resize(static_cast<std::size_t>(mesh.n_elements()) * nqp);

  for (int e = 0; e < mesh.n_elements(); ++e) {
    int ei = e / mesh.ny, ej = e % mesh.ny;
    LocalWork lw = element_matrix(mesh, field, spec, mu0, ei, ej, q);
    for (int k = 0; k < nqp; ++k)
      sys.mass_weight[static_cast<std::size_t>(e) * nqp + k] = lw.sqrtdet[k];
    int gl[4];
    for (int c = 0; c < 4; ++c)
      gl[c] = pat.free_of_node[mesh.node(ei + kCornerDi[c], ej + kCornerDj[c])];
    for (int a = 0; a < 4; ++a) {
      if (gl[a] < 0) continue;
      for (int c = 0; c < 4; ++c) {
        if (gl[c] < 0) continue;
        auto lo = pat.col.begin() + pat.row_ptr[gl[a]];
        auto hi = pat.col.begin() + pat.row_ptr[gl[a] + 1];
        auto it = std::lower_bound(lo, hi, gl[c]);
        val[it - pat.col.begin()] += lw.A[a * 4 + c];
      }
    }
  }
  sys.free_of_node = std::move(pat.free_of_node);
  sys.node_of_free = std::move(pat.node_of_free);
  sys.A = ComplexSparse(pat.free_count, std::move(pat.row_ptr),
                        std::move(pat.col), std::move(val), true);
  return sys;
}

std::vector<cplx> AssembledSystem::expand(
    const std::vector<cplx>& free_vec) const {
  std::vector<cplx> full(mesh.n_nodes(), cplx(0.0));
  for (int f = 0; f < free_count; ++f) full[node_of_free[f]] = free_vec[f];
  return full;
}

std::vector<cplx> AssembledSystem::restrict_to_free(
    const std::vector<cplx>& full_vec) const {
  std::vector<cplx> out(free_count);
  for (int f = 0; f < free_count; ++f) out[f] = full_vec[node_of_free[f]];
  return out;
}

RhsResult assemble_rhs(const AssembledSystem& system, const SourceSpec& source,
                       const ModalBasis& basis, double pml_r) {
  const Mesh& mesh = system.mesh;
  if (source.mode_index < 0 || source.mode_index >= basis.n_modes())
    throw InvalidArgument("rhs: source mode index outside the basis");
  RhsResult out;
  out.b.assign(system.free_count, cplx(0.0));
  out.source_in_layer_warning = !source.inside_physical_region(pml_r);

  const QuadRule q = gauss_rule(system.quad_points);
  const int nqp = system.quad_points * system.quad_points;
  const double hx = mesh.hx(), hy = mesh.hy();
  const double jac = hx * hy / 4.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    int ei = e / mesh.ny, ej = e % mesh.ny;
    double ex = mesh.x(ei), ey = mesh.y(ej);
    // skip elements where the Gaussian is numerically zero (6 sigma-ish)
    double cut = 1.5 * source.support_halfwidth();
    if (ex > source.x0 + cut || ex + hx < source.x0 - cut) continue;
    int qp = 0;
    for (std::size_t a = 0; a < q.pts.size(); ++a) {
      for (std::size_t b = 0; b < q.pts.size(); ++b, ++qp) {
        double xi = q.pts[a], eta = q.pts[b];
        double wq = q.wts[a] * q.wts[b] * jac;
        double xq = ex + hx * (xi + 1.0) / 2.0;
        double yq = ey + hy * (eta + 1.0) / 2.0;
        cplx f = source.amplitude *
                 std::exp(-source.gamma * (xq - source.x0) * (xq - source.x0)) *
                 basis.eval(source.mode_index, yq);
        cplx common =
            wq * system.mass_weight[static_cast<std::size_t>(e) * nqp + qp] * f;
        double N[4];
        shape_values(xi, eta, N);
        for (int c = 0; c < 4; ++c) {
          int fr = system.free_of_node[mesh.node(ei + kCornerDi[c],
                                                 ej + kCornerDj[c])];
          if (fr >= 0) out.b[fr] += common * N[c];
        }
      }
    }
  }
  return out;
}

DiscreteNorms discrete_norms(const Mesh& mesh, const std::vector<cplx>& nodal,
                             std::pair<double, double> x_window) {
  if (static_cast<int>(nodal.size()) != mesh.n_nodes())
    throw InvalidArgument("discrete_norms: expected full nodal vector");
  if (!(x_window.second > x_window.first))
    throw InvalidArgument("discrete_norms: empty window");
  const QuadRule q = gauss_rule(2);
  const double hx = mesh.hx(), hy = mesh.hy();
  const double jac = hx * hy / 4.0;
  const double eps = 1e-9 * std::max(1.0, mesh.R);
  double l2 = 0.0, h1 = 0.0;
  bool any = false;
  for (int ei = 0; ei < mesh.nx; ++ei) {
    double xl = mesh.x(ei), xr = mesh.x(ei + 1);
    if (xl < x_window.first - eps || xr > x_window.second + eps) continue;
    any = true;
    for (int ej = 0; ej < mesh.ny; ++ej) {
      cplx u[4];
      for (int c = 0; c < 4; ++c)
        u[c] = nodal[mesh.node(ei + kCornerDi[c], ej + kCornerDj[c])];
      for (std::size_t a = 0; a < q.pts.size(); ++a)
        for (std::size_t b = 0; b < q.pts.size(); ++b) {
          double xi = q.pts[a], eta = q.pts[b];
          double wq = q.wts[a] * q.wts[b] * jac;
          double N[4], dNdx[4], dNdy[4];
          shape_values(xi, eta, N);
          shape_grads(xi, eta, hx, hy, dNdx, dNdy);
          cplx v = 0.0, vx = 0.0, vy = 0.0;
          for (int c = 0; c < 4; ++c) {
            v += u[c] * N[c];
            vx += u[c] * dNdx[c];
            vy += u[c] * dNdy[c];
          }
          l2 += wq * std::norm(v);
          h1 += wq * (std::norm(vx) + std::norm(vy));
        }
    }
  }
  if (!any) throw InvalidArgument("discrete_norms: window contains no element");
  return {std::sqrt(l2), std::sqrt(h1)};
}

}  // namespace wavepml
