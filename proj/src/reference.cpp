#include "wavepml/reference.hpp"

#include <algorithm>
#include <cmath>

namespace wavepml {

namespace {

// Adaptive Simpson for complex integrands.
cplx simpson_panel(double a, double b, cplx fa, cplx fm, cplx fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

cplx adaptive_simpson(const std::function<cplx(double)>& f, double a, double m,
                      double b, cplx fa, cplx fm, cplx fb, cplx whole,
                      double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  cplx flm = f(lm), frm = f(rm);
  cplx left = simpson_panel(a, m, fa, flm, fm);
  cplx right = simpson_panel(m, b, fm, frm, fb);
  cplx delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, tol / 2.0,
                          depth - 1) +
         adaptive_simpson(f, m, rm, b, fm, frm, fb, right, tol / 2.0,
                          depth - 1);
}

cplx integrate(const std::function<cplx(double)>& f, double a, double b,
               double tol) {
  if (!(b > a)) return 0.0;
  double m = 0.5 * (a + b);
  cplx fa = f(a), fm = f(m), fb = f(b);
  cplx whole = simpson_panel(a, b, fa, fm, fb);
  return adaptive_simpson(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

std::vector<cplx> modal_green_solution(
    cplx k, const std::function<cplx(double)>& source_profile,
    double support_lo, double support_hi, const std::vector<double>& x_eval) {
  if (std::abs(k) < 1e-8)
    throw ThresholdError("modal Green's function undefined at the threshold k = 0");
  if (k.imag() < 0.0)
    throw InvalidArgument("modal Green's function needs Im k >= 0");
  double lo = std::max(0.0, support_lo);
  double hi = support_hi;

  // crude magnitude scale so the adaptive tolerance is relative
  double scale = 0.0;
  for (int i = 0; i <= 16; ++i)
    scale = std::max(scale, std::abs(source_profile(lo + (hi - lo) * i / 16.0)));
  if (scale == 0.0) return std::vector<cplx>(x_eval.size(), cplx(0.0));
  double tol = 1e-9 * scale * std::max(1.0, hi - lo);

  const cplx ik = cplx(0.0, 1.0) * k;
  auto f_minus = [&](double t) { return std::exp(-ik * t) * source_profile(t); };
  auto f_plus = [&](double t) { return std::exp(ik * t) * source_profile(t); };

  // u(x) = (i/2k) [ e^{ikx} (I1(x) + I3) + e^{-ikx} I2(x) ],
  //   I1 = int_lo^x e^{-ikt} f,  I2 = int_x^hi e^{ikt} f,  I3 = int_lo^hi e^{ikt} f
  // (for x below the support I1 = 0 and I2 = I3).
  const cplx pref = cplx(0.0, 1.0) / (2.0 * k);
  const cplx I3 = integrate(f_plus, lo, hi, tol);

  std::vector<cplx> out(x_eval.size());
#pragma omp parallel for schedule(static)
  for (long idx = 0; idx < static_cast<long>(x_eval.size()); ++idx) {
    double x = x_eval[idx];
    double xc = std::clamp(x, lo, hi);
    cplx I1 = integrate(f_minus, lo, xc, tol);
    cplx I2 = integrate(f_plus, xc, hi, tol);
    // e^{ik|x-t|} splits into e^{ikx} e^{-ikt} for t < x and
    // e^{-ikx} e^{ikt} for t > x; tails outside the support vanish
    if (x > hi)
      out[idx] = pref * std::exp(ik * x) * (I1 + I3);
    else if (x < lo)
      out[idx] = pref * (std::exp(-ik * x) * I2 + std::exp(ik * x) * I3);
    else
      out[idx] = pref * (std::exp(ik * x) * I1 + std::exp(-ik * x) * I2 +
                         std::exp(ik * x) * I3);
  }
  return out;
}

cplx ModalField::eval(double x, double y) const {
  if (x_grid.size() < 2) throw InvalidArgument("modal field: grid too small");
  double h = x_grid[1] - x_grid[0];
  double t = (x - x_grid.front()) / h;
  auto i = static_cast<long>(t);
  i = std::clamp<long>(i, 0, static_cast<long>(x_grid.size()) - 2);
  double w = t - i;
  cplx acc = 0.0;
  for (std::size_t j = 0; j < modes.size(); ++j) {
    cplx uj = modes[j][i] * (1.0 - w) + modes[j][i + 1] * w;
    acc += uj * basis->eval(static_cast<int>(j), y);
  }
  return acc;
}

std::vector<cplx> ModalField::interpolate(const Mesh& mesh) const {
  std::vector<cplx> out(mesh.n_nodes());
  for (int i = 0; i <= mesh.nx; ++i)
    for (int j = 0; j <= mesh.ny; ++j)
      out[mesh.node(i, j)] = eval(mesh.x(i), mesh.y(j));
  return out;
}

ModalField reference_field(const std::vector<SourceSpec>& sources,
                           const ModalBasis& basis, double mu0,
                           const std::vector<double>& x_grid) {
  ModalField field;
  field.x_grid = x_grid;
  field.basis = &basis;
  field.modes.assign(basis.n_modes(),
                     std::vector<cplx>(x_grid.size(), cplx(0.0)));
  for (int j = 0; j < basis.n_modes(); ++j)
    field.wavenumbers.push_back(axial_wavenumber(mu0, basis.eigenvalues()[j]));

  for (const SourceSpec& s : sources) {
    if (s.mode_index < 0 || s.mode_index >= basis.n_modes())
      throw InvalidArgument("reference field: source mode outside the basis");
    auto profile = [&](double x) {
      return s.amplitude * std::exp(-s.gamma * (x - s.x0) * (x - s.x0));
    };
    double hw = 1.5 * s.support_halfwidth();
    std::vector<cplx> uj =
        modal_green_solution(field.wavenumbers[s.mode_index], profile,
                             s.x0 - hw, s.x0 + hw, x_grid);
    for (std::size_t i = 0; i < x_grid.size(); ++i)
      field.modes[s.mode_index][i] += uj[i];
  }
  return field;
}

ModeAmplitudes mode_amplitudes(cplx u1, cplx u2, double x1, double x2,
                               cplx k) {
  if (!(x2 > x1)) throw InvalidArgument("mode amplitudes: need x1 < x2");
  const cplx ik = cplx(0.0, 1.0) * k;
  // determinant of [[e^{ikx1}, e^{-ikx1}], [e^{ikx2}, e^{-ikx2}]]
  cplx half = std::exp(ik * (x2 - x1)) - std::exp(-ik * (x2 - x1));
  if (std::abs(half) < 0.2)
    throw StationError(
        "station pair nearly degenerate (e^{ik dx} close to +-1); move x2");
  cplx e1p = std::exp(ik * x1), e1m = std::exp(-ik * x1);
  cplx e2p = std::exp(ik * x2), e2m = std::exp(-ik * x2);
  cplx det = e1p * e2m - e1m * e2p;
  return {(u1 * e2m - u2 * e1m) / det, (u2 * e1p - u1 * e2p) / det};
}

cplx project_onto_mode(const Mesh& mesh, const std::vector<cplx>& nodal,
                       const ModalBasis& basis, int j, double x_station) {
  int i = static_cast<int>(std::lround(x_station / mesh.hx()));
  i = std::clamp(i, 0, mesh.nx);
  const int ny = mesh.ny;
  const double hy = mesh.hy();

  if (basis.flat()) {
    // consistent-mass projection: diagonalizes the discrete transverse
    // operator exactly, so propagating-mode extraction carries no O(h^2)
    // cross-mode bias
    auto mass_apply = [&](const std::vector<double>& v, int m) {
      double acc = 0.0;
      if (m > 0) acc += hy / 6.0 * v[m - 1];
      if (m < ny) acc += hy / 6.0 * v[m + 1];
      acc += (m == 0 || m == ny ? hy / 3.0 : 2.0 * hy / 3.0) * v[m];
      return acc;
    };
    std::vector<double> phi(ny + 1);
    for (int m = 0; m <= ny; ++m) phi[m] = basis.eval(j, mesh.y(m));
    cplx num = 0.0;
    double den = 0.0;
    for (int m = 0; m <= ny; ++m) {
      double Mphi = mass_apply(phi, m);
      num += nodal[mesh.node(i, m)] * Mphi;
      den += phi[m] * Mphi;
    }
    return num / den;
  }

  // weighted section: Simpson quadrature of the interpolant against phi_j h
  const int refine = 8;
  int npts = refine * ny;
  cplx acc = 0.0;
  double hq = mesh.Ly / npts;
  for (int m = 0; m <= npts; ++m) {
    double y = m * hq;
    double c = (m == 0 || m == npts) ? 1.0 : (m % 2 ? 4.0 : 2.0);
    int cell = std::min(static_cast<int>(y / hy), ny - 1);
    double t = (y - cell * hy) / hy;
    cplx u = nodal[mesh.node(i, cell)] * (1.0 - t) +
             nodal[mesh.node(i, cell + 1)] * t;
    acc += c * u * basis.eval(j, y) * basis.weight_at(y);
  }
  return acc * hq / 3.0;
}

double discrete_transverse_eigenvalue(int j, int ny, double Ly) {
  double hy = Ly / ny;
  double th = j * M_PI * hy / Ly;
  return 6.0 / (hy * hy) * (1.0 - std::cos(th)) / (2.0 + std::cos(th));
}

cplx discrete_axial_wavenumber(double mu_eff, double hx) {
  // interior stencil of Q1 consistent-mass: cos(th) = (1 - q/3)/(1 + q/6),
  // q = mu_eff hx^2
  double q = mu_eff * hx * hx;
  double c = (1.0 - q / 3.0) / (1.0 + q / 6.0);
  if (c >= -1.0 && c <= 1.0) return {std::acos(c) / hx, 0.0};
  if (c > 1.0) return {0.0, std::acosh(c) / hx};  // evanescent branch
  // beyond the discrete passband
  return {M_PI / hx, std::acosh(-c) / hx};
}

}  // namespace wavepml
