#include "shellopt/bench/catenary.hpp"

#include <cmath>
#include <cstdlib>

#include "shellopt/errors.hpp"

namespace shellopt::bench {

CatenaryReference catenary_reference(double span, double arc_length,
                                     int samples) {
  if (!(span > 0.0)) throw Error("catenary: span must be positive");
  if (!(arc_length > span))
    throw Error("catenary: arc length must exceed the span");
  if (samples < 2) throw Error("catenary: need at least two samples");

  // residual is decreasing in a: small a sags deeply (long arc), large a is
  // nearly straight (arc -> span)
  const auto residual = [&](double a) {
    return 2.0 * a * std::sinh(span / (2.0 * a)) - arc_length;
  };
  double lo = span / 100.0;
  double hi = 100.0 * span;
  while (residual(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18 * span) throw Error("catenary: failed to bracket the root");
  }
  while (residual(lo) < 0.0) lo /= 10.0;
  for (int it = 0; it < 400 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) > 0.0 ? lo : hi) = mid;
  }

  CatenaryReference ref;
  ref.a = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {  // Newton polish to machine precision
    const double u = span / (2.0 * ref.a);
    const double slope = 2.0 * std::sinh(u) - (span / ref.a) * std::cosh(u);
    if (slope == 0.0) break;
    ref.a -= residual(ref.a) / slope;
  }
  ref.span = span;
  ref.arc_length = arc_length;
  ref.points.resize(samples);
  for (int i = 0; i < samples; ++i) {
    const double x = span * i / (samples - 1.0);
    ref.points[i] = {x, catenary_z(ref, x)};
  }
  return ref;
}

double catenary_z(const CatenaryReference& ref, double x) {
  return ref.a * (std::cosh(ref.span / (2.0 * ref.a)) -
                  std::cosh((x - 0.5 * ref.span) / ref.a));
}

double mse_to_catenary(const fem::ShellModel& model,
                       const CatenaryReference& ref) {
  const auto& mesh = model.mesh;
  int best_j = 0;
  double best_d = std::abs(0.0 - 0.5);
  for (int j = 1; j <= mesh.ny; ++j) {
    const double d = std::abs(static_cast<double>(j) / mesh.ny - 0.5);
    if (d < best_d) {
      best_d = d;
      best_j = j;
    }
  }
  double sum = 0.0;
  int count = 0;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (mesh.vertex_grid[v][1] != best_j) continue;
    const double dz =
        model.coords[v].z() - catenary_z(ref, model.coords[v].x());
    sum += dz * dz;
    ++count;
  }
  if (count == 0) throw Error("catenary mse: centerline row is empty");
  return sum / count;
}

}  // namespace shellopt::bench
