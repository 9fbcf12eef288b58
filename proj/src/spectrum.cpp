#include "wavepml/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavepml/pml.hpp"

namespace wavepml {

SpectrumCurves essential_curves(cplx lambda, double beta,
                                const ModalBasis& basis, double xi_max,
                                int samples) {
  if (beta < 0.0) throw InvalidArgument("essential curves: beta must be >= 0");
  if (samples < 3) throw InvalidArgument("essential curves: too few samples");
  if (!(xi_max > 0.0)) throw InvalidArgument("essential curves: xi_max must be positive");
  if (std::abs(lambda + 1.0) < 1e-12)
    throw InvalidArgument("essential curves: lambda = -1 is singular");

  SpectrumCurves c;
  c.lambda = lambda;
  c.beta = beta;
  c.xi_max = xi_max;
  c.samples = samples;
  c.thresholds = basis.eigenvalues();
  c.xi.resize(samples);
  for (int i = 0; i < samples; ++i)
    c.xi[i] = -xi_max + 2.0 * xi_max * i / (samples - 1);
  cplx inv2 = 1.0 / ((1.0 + lambda) * (1.0 + lambda));
  c.mu.resize(c.thresholds.size());
  for (std::size_t j = 0; j < c.thresholds.size(); ++j) {
    c.mu[j].resize(samples);
    for (int i = 0; i < samples; ++i) {
      cplx w(c.xi[i], beta);
      c.mu[j][i] = c.thresholds[j] + inv2 * w * w;
    }
  }
  return c;
}

namespace {

double point_segment_distance(cplx p, cplx a, cplx b) {
  cplx ab = b - a;
  double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

// distance to the piecewise-linear interpolant of the sampled curves, so
// points lying on a curve measure as (numerically) zero
double min_distance_sampled(cplx mu0, const SpectrumCurves& c) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& curve : c.mu)
    for (std::size_t i = 0; i + 1 < curve.size(); ++i)
      best = std::min(best, point_segment_distance(mu0, curve[i], curve[i + 1]));
  return best;
}

}  // namespace

double spectral_distance(cplx mu0, const SpectrumCurves& curves) {
  double d = min_distance_sampled(mu0, curves);
  // regenerate at twice the sampling density from the stored thresholds
  SpectrumCurves fine = curves;
  fine.samples = 2 * curves.samples - 1;
  fine.xi.resize(fine.samples);
  for (int i = 0; i < fine.samples; ++i)
    fine.xi[i] = -curves.xi_max + 2.0 * curves.xi_max * i / (fine.samples - 1);
  cplx inv2 = 1.0 / ((1.0 + curves.lambda) * (1.0 + curves.lambda));
  for (std::size_t j = 0; j < fine.thresholds.size(); ++j) {
    fine.mu[j].resize(fine.samples);
    for (int i = 0; i < fine.samples; ++i) {
      cplx w(fine.xi[i], curves.beta);
      fine.mu[j][i] = fine.thresholds[j] + inv2 * w * w;
    }
  }
  double d2 = min_distance_sampled(mu0, fine);
  double scale = std::max(std::abs(d), 1e-12);
  if (std::abs(d - d2) > 0.01 * scale)
    throw RefinementError(
        "spectral distance under-resolved: doubling the xi sampling moved the "
        "result by more than 1%");
  return d2;
}

double arch_height(double mu0, const SpectrumCurves& curves) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& curve : curves.mu) {
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
      double r0 = curve[i].real(), r1 = curve[i + 1].real();
      if ((r0 - mu0) * (r1 - mu0) > 0.0) continue;  // no crossing
      double t = (r1 != r0) ? (mu0 - r0) / (r1 - r0) : 0.5;
      double im = curve[i].imag() + t * (curve[i + 1].imag() - curve[i].imag());
      best = std::max(best, im);
    }
  }
  return best;
}

double beta_endpoint_bisect(double mu0, cplx lambda, const ModalBasis& basis,
                            double tol) {
  if (!(mu0 > basis.eigenvalues().front()))
    throw InvalidArgument("beta bisection expects mu0 above the lowest threshold");
  double nu_max = basis.eigenvalues().back();
  double xi_max = 3.0 * std::sqrt(std::abs(mu0) + nu_max);
  auto height = [&](double beta) {
    return arch_height(mu0, essential_curves(lambda, beta, basis, xi_max, 8001));
  };
  double lo = 0.0;
  double h_lo = height(lo);
  if (!(h_lo < 0.0))
    throw Error("beta bisection: curves already touch mu0 at beta = 0");
  // bracket: grow beta until a parabola arches over mu0
  double hi = 0.25;
  int guard = 0;
  while (height(hi) < 0.0) {
    hi *= 2.0;
    if (++guard > 20) throw Error("beta bisection: failed to bracket");
  }
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (height(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace wavepml
