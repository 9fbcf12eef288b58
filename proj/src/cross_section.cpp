#include "wavepml/cross_section.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace wavepml {

CrossSection CrossSection::make_flat(double L) {
  if (!(L > 0.0)) throw InvalidArgument("cross-section length must be positive");
  CrossSection cs;
  cs.length = L;
  cs.flat = true;
  return cs;
}

CrossSection CrossSection::make_weighted(double L,
                                         std::function<double(double)> h) {
  if (!(L > 0.0)) throw InvalidArgument("cross-section length must be positive");
  CrossSection cs;
  cs.length = L;
  cs.weight = std::move(h);
  cs.flat = false;
  return cs;
}

double ModalBasis::eval(int j, double y) const {
  if (j < 0 || j >= n_modes()) throw InvalidArgument("mode index out of range");
  if (flat_) {
    if (j == 0) return 1.0 / std::sqrt(length_);
    return std::sqrt(2.0 / length_) * std::cos(j * M_PI * y / length_);
  }
  const auto& g = grid_;
  double yy = std::clamp(y, g.front(), g.back());
  double h = g[1] - g[0];
  auto i = static_cast<std::size_t>((yy - g.front()) / h);
  if (i >= g.size() - 1) i = g.size() - 2;
  double t = (yy - g[i]) / h;
  return samples_[j][i] * (1.0 - t) + samples_[j][i + 1] * t;
}

double ModalBasis::project(int j,
                           const std::function<double(double)>& f) const {
  const int n = 4000;  // Simpson panels
  double h = length_ / n;
  double acc = 0.0;
  auto w = [&](double y) { return flat_ ? 1.0 : weight_(y); };
  for (int i = 0; i <= n; ++i) {
    double y = i * h;
    double c = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += c * f(y) * eval(j, y) * w(y);
  }
  return acc * h / 3.0;
}

ModalBasis neumann_eigenpairs(const CrossSection& cs, int n, int grid_nodes) {
  if (n < 1) throw InvalidArgument("need at least one mode");
  ModalBasis basis;
  basis.length_ = cs.length;
  basis.flat_ = cs.flat;

  if (cs.flat) {
    for (int j = 0; j < n; ++j) {
      double k = j * M_PI / cs.length;
      basis.nu_.push_back(k * k);
    }
    return basis;
  }

  if (grid_nodes < 3) throw InvalidArgument("grid too coarse");
  const int N = grid_nodes;
  const double L = cs.length;
  const double h = L / (N - 1);

  std::vector<double> w(N), p_half(N - 1);
  for (int i = 0; i < N; ++i) {
    w[i] = cs.weight(i * h);
    if (!(w[i] > 0.0) || !std::isfinite(w[i]))
      throw InvalidArgument("invalid cross-section: weight profile must be strictly positive");
  }
  for (int i = 0; i + 1 < N; ++i) {
    double wm = cs.weight((i + 0.5) * h);
    if (!(wm > 0.0)) throw InvalidArgument("invalid cross-section: weight profile must be strictly positive");
    p_half[i] = 1.0 / wm;
  }

  // Conservative scheme K phi = nu W phi with lumped trapezoid mass;
  // symmetrized to an ordinary tridiagonal problem via W^{-1/2} K W^{-1/2}.
  std::vector<double> mass(N), diag(N), off(N - 1);
  for (int i = 0; i < N; ++i)
    mass[i] = w[i] * h * ((i == 0 || i == N - 1) ? 0.5 : 1.0);
  for (int i = 0; i < N; ++i) {
    double k = 0.0;
    if (i > 0) k += p_half[i - 1] / h;
    if (i < N - 1) k += p_half[i] / h;
    diag[i] = k / mass[i];
  }
  for (int i = 0; i + 1 < N; ++i)
    off[i] = -p_half[i] / h / std::sqrt(mass[i] * mass[i + 1]);

  std::vector<double> evals(N);
  std::vector<double> evecs(static_cast<std::size_t>(N) * n);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  lapack_int m = 0;
  lapack_int info = LAPACKE_dstevr(LAPACK_ROW_MAJOR, 'V', 'I', N, diag.data(),
                                   off.data(), 0.0, 0.0, 1, n, 0.0, &m,
                                   evals.data(), evecs.data(), n,
                                   isuppz.data());
  if (info != 0 || m < n)
    throw Error("cross-section eigensolve failed (LAPACK info=" +
                std::to_string(info) + ")");

  basis.grid_.resize(N);
  for (int i = 0; i < N; ++i) basis.grid_[i] = i * h;
  basis.weight_ = cs.weight;
  basis.samples_.assign(n, std::vector<double>(N));
  for (int j = 0; j < n; ++j) {
    basis.nu_.push_back(evals[j]);
    // undo the symmetrizing congruence, normalize against the W-inner
    // product, and fix the sign so phi_j(0) > 0
    double norm2 = 0.0;
    for (int i = 0; i < N; ++i) {
      double v = evecs[static_cast<std::size_t>(i) * n + j] / std::sqrt(mass[i]);
      basis.samples_[j][i] = v;
      norm2 += v * v * mass[i];
    }
    double scale = 1.0 / std::sqrt(norm2);
    if (basis.samples_[j][0] < 0.0) scale = -scale;
    for (int i = 0; i < N; ++i) basis.samples_[j][i] *= scale;
  }

  // lowest eigenvalue must be (numerically) zero and the spectrum simple
  if (std::abs(basis.nu_[0]) > 1e-8)
    throw Error("cross-section eigensolve: lowest Neumann eigenvalue not zero");
  for (int j = 0; j + 1 < n; ++j)
    if (!(basis.nu_[j] < basis.nu_[j + 1]))
      throw Error("cross-section eigensolve: spectrum not strictly increasing");
  return basis;
}

cplx axial_wavenumber(double mu0, double nu) {
  double d = mu0 - nu;
  if (std::abs(d) < 1e-8)
    throw ThresholdError("spectral parameter mu0 hits a cross-section threshold");
  if (d > 0.0) return {std::sqrt(d), 0.0};
  return {0.0, std::sqrt(-d)};
}

double decay_rate_bound(double mu0, cplx lambda, const ModalBasis& basis) {
  if (std::abs(lambda) >= 1.0 / std::sqrt(2.0))
    throw InvalidArgument("|lambda| must be below 1/sqrt(2)");
  double best = std::numeric_limits<double>::infinity();
  bool certified = false;
  for (int j = 0; j < basis.n_modes(); ++j) {
    double nu = basis.eigenvalues()[j];
    double c = std::abs(std::imag((1.0 + lambda) * axial_wavenumber(mu0, nu)));
    best = std::min(best, c);
    if (nu > mu0) {
      // evanescent contributions grow with nu, so every remaining mode
      // exceeds this one and the minimum is certified
      certified = true;
      break;
    }
  }
  if (!certified)
    throw InsufficientModesError(
        "modal basis ends before the minimum can be certified; extend it");
  return best;
}

}  // namespace wavepml
