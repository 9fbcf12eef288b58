#include "wavepml/geometry.hpp"

#include <cmath>

namespace wavepml {

Preset preset_from_string(const std::string& name) {
  if (name == "straight") return Preset::straight;
  if (name == "bent") return Preset::bent;
  if (name == "stretched") return Preset::stretched;
  throw InvalidArgument("unknown metric preset '" + name + "'");
}

std::string to_string(Preset p) {
  switch (p) {
    case Preset::straight: return "straight";
    case Preset::bent: return "bent";
    case Preset::stretched: return "stretched";
  }
  return "?";
}

namespace {

void validate_common(const MetricField& f) {
  if (!(std::sin(f.alpha) < 1.0 / std::sqrt(2.0)) || !(f.alpha > 0.0))
    throw InvalidArgument("sector half-angle must satisfy 0 < sin(alpha) < 1/sqrt(2)");
}

}  // namespace

MetricField MetricField::straight(CrossSection cs, double alpha) {
  MetricField f;
  f.preset = Preset::straight;
  f.cross_section = std::move(cs);
  f.alpha = alpha;
  validate_common(f);
  return f;
}

MetricField MetricField::bent(CrossSection cs, double a, double b_exp,
                              double g_exp, double alpha) {
  if (!(b_exp < 1.0)) throw InvalidArgument("bent preset needs b_exp < 1");
  if (!(g_exp < 0.0)) throw InvalidArgument("bent preset needs g_exp < 0");
  if (!cs.flat)
    throw InvalidArgument("bent preset is a pullback of the flat strip; weight profile must be flat");
  MetricField f;
  f.preset = Preset::bent;
  f.a = a;
  f.b_exp = b_exp;
  f.g_exp = g_exp;
  f.cross_section = std::move(cs);
  f.alpha = alpha;
  validate_common(f);
  return f;
}

MetricField MetricField::stretched(CrossSection cs, double alpha) {
  if (!cs.flat)
    throw InvalidArgument("stretched preset is a pullback of the flat strip; weight profile must be flat");
  MetricField f;
  f.preset = Preset::stretched;
  f.cross_section = std::move(cs);
  f.alpha = alpha;
  validate_common(f);
  return f;
}

MetricSample make_sample(cplx g00, cplx g01, cplx g11) {
  MetricSample s;
  s.g00 = g00;
  s.g01 = g01;
  s.g11 = g11;
  s.det = g00 * g11 - g01 * g01;
  if (std::abs(s.det) < 1e-10)
    throw DegeneracyError("metric determinant below non-degeneracy tolerance");
  s.inv00 = g11 / s.det;
  s.inv01 = -g01 / s.det;
  s.inv11 = g00 / s.det;
  s.sqrt_det = std::sqrt(s.det);
  return s;
}

namespace {

void check_sector(const MetricField& f, cplx z) {
  double re = z.real(), im = z.imag();
  if (im == 0.0 && re >= 0.0) return;  // real axis
  if (re > 0.0 && std::abs(im) < std::tan(f.alpha) * re) return;
  throw DomainError("axial coordinate outside the analyticity sector");
}

}  // namespace

MetricSample metric_eval(const MetricField& field, cplx z, double y) {
  switch (field.preset) {
    case Preset::straight:
      return make_sample(1.0, 0.0, field.cross_section.weight_at(y));
    case Preset::bent: {
      check_sector(field, z);
      cplx base = z + 3.0;
      if (base.real() <= 0.0 && base.imag() == 0.0)
        throw DomainError("bent preset hit the branch cut of (z+3)^p");
      cplx p = field.b_exp * std::pow(base, field.b_exp - 1.0) * field.a +
               field.g_exp * std::pow(base, field.g_exp - 1.0) * y;
      cplx q = 1.0 + std::pow(base, field.g_exp);
      return make_sample(1.0 + p * p, p * q, q * q);
    }
    case Preset::stretched: {
      check_sector(field, z);
      cplx l4 = std::log(z + 4.0), l5 = std::log(z + 5.0);
      cplx u = 1.0 + 1.0 / l4;
      cplx v = 1.0 + 1.0 / l5;
      cplx p = -y / ((z + 5.0) * l5 * l5);
      return make_sample(u * u + p * p, p * v, v * v);
    }
  }
  throw InvalidArgument("unknown preset");
}

DecayReport decay_report(const MetricField& field,
                         const std::vector<double>& radii,
                         const std::vector<double>& ray_angles,
                         int y_samples, bool with_derivatives) {
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      throw InvalidArgument("radii must be increasing");
  for (double th : ray_angles)
    if (!(std::abs(th) < field.alpha))
      throw InvalidArgument("ray angle outside the sector");

  DecayReport rep;
  rep.radii = radii;
  const double L = field.cross_section.length;
  for (double rho : radii) {
    double d0 = 0.0, d1 = 0.0, d2 = 0.0, ddy = 0.0;
    for (double th : ray_angles) {
      cplx z = rho * std::exp(cplx(0.0, th));
      for (int m = 0; m < y_samples; ++m) {
        double y = L * m / (y_samples - 1);
        MetricSample s = metric_eval(field, z, y);
        double href = field.cross_section.weight_at(y);
        d0 = std::max(d0, std::abs(s.g00 - 1.0));
        d1 = std::max(d1, std::abs(s.g01));
        d2 = std::max(d2, std::abs(s.g11 - href));
        if (with_derivatives) {
          double dy = L * 1e-5;
          double yl = std::max(0.0, y - dy), yr = std::min(L, y + dy);
          MetricSample sl = metric_eval(field, z, yl);
          MetricSample sr = metric_eval(field, z, yr);
          double hl = field.cross_section.weight_at(yl);
          double hr = field.cross_section.weight_at(yr);
          double inv = 1.0 / (yr - yl);
          ddy = std::max(ddy, std::abs((sr.g00 - sl.g00) * inv));
          ddy = std::max(ddy, std::abs((sr.g01 - sl.g01) * inv));
          ddy = std::max(ddy, std::abs(((sr.g11 - hr) - (sl.g11 - hl)) * inv));
        }
      }
    }
    rep.dev_g00.push_back(d0);
    rep.dev_g01.push_back(d1);
    rep.dev_g11.push_back(d2);
    if (with_derivatives) rep.dev_dy.push_back(ddy);
  }
  return rep;
}

}  // namespace wavepml
