#include "shellopt/geometry/basis.hpp"

#include <algorithm>
#include <cmath>

namespace shellopt::geometry {

namespace {

// Uniform cubic B-spline segment polynomials on s in [0,1] for the four
// controls at offsets -1..2 from the span start.
void bspline_segment(double s, double n[4], double dn[4], double d2n[4]) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double u = 1.0 - s;
  n[0] = u * u * u / 6.0;
  n[1] = (3.0 * s3 - 6.0 * s2 + 4.0) / 6.0;
  n[2] = (-3.0 * s3 + 3.0 * s2 + 3.0 * s + 1.0) / 6.0;
  n[3] = s3 / 6.0;
  dn[0] = -0.5 * u * u;
  dn[1] = 0.5 * (3.0 * s2 - 4.0 * s);
  dn[2] = 0.5 * (-3.0 * s2 + 2.0 * s + 1.0);
  dn[3] = 0.5 * s2;
  d2n[0] = u;
  d2n[1] = 3.0 * s - 2.0;
  d2n[2] = -3.0 * s + 1.0;
  d2n[3] = s;
}

// Linear combination of real vertices standing in for one nominal control.
using Combo = std::vector<std::pair<int, double>>;

Combo& axpy(Combo& dst, const Combo& src, double factor) {
  for (const auto& [vid, w] : src) {
    bool found = false;
    for (auto& [dvid, dw] : dst) {
      if (dvid == vid) {
        dw += factor * w;
        found = true;
        break;
      }
    }
    if (!found) dst.emplace_back(vid, factor * w);
  }
  return dst;
}

struct Resolver {
  const ParametricMesh& mesh;
  int ex, ey;
  bool ghost_w, ghost_e, ghost_s, ghost_n;  // no live element on that side

  Combo resolve(int i, int j, int depth) const {
    if (depth > 8) throw Error("control stencil resolution failed");
    Combo out;
    if (i == ex - 1 && ghost_w) {
      axpy(out, resolve(ex, j, depth + 1), 2.0);
      axpy(out, resolve(ex + 1, j, depth + 1), -1.0);
      return out;
    }
    if (i == ex + 2 && ghost_e) {
      axpy(out, resolve(ex + 1, j, depth + 1), 2.0);
      axpy(out, resolve(ex, j, depth + 1), -1.0);
      return out;
    }
    if (j == ey - 1 && ghost_s) {
      axpy(out, resolve(i, ey, depth + 1), 2.0);
      axpy(out, resolve(i, ey + 1, depth + 1), -1.0);
      return out;
    }
    if (j == ey + 2 && ghost_n) {
      axpy(out, resolve(i, ey + 1, depth + 1), 2.0);
      axpy(out, resolve(i, ey, depth + 1), -1.0);
      return out;
    }
    const int vid = mesh.vertex_id(i, j);
    if (vid >= 0) {
      out.emplace_back(vid, 1.0);
      return out;
    }
    // Diagonal gap next to a hole corner: both element-side neighbours exist,
    // extrapolate over the parallelogram they span.
    const int di = i < ex ? 1 : (i > ex + 1 ? -1 : 0);
    const int dj = j < ey ? 1 : (j > ey + 1 ? -1 : 0);
    if (di == 0 && dj == 0) throw Error("control stencil resolution failed");
    axpy(out, resolve(i + di, j, depth + 1), 1.0);
    axpy(out, resolve(i, j + dj, depth + 1), 1.0);
    axpy(out, resolve(i + di, j + dj, depth + 1), -1.0);
    return out;
  }
};

}  // namespace

ElementStencil build_element_stencil(const ParametricMesh& mesh, int element) {
  if (element < 0 || element >= mesh.element_count())
    throw Error("element index out of range");
  const QuadElement& e = mesh.elements[element];
  Resolver r{mesh,
             e.ex,
             e.ey,
             mesh.element_id(e.ex - 1, e.ey) < 0,
             mesh.element_id(e.ex + 1, e.ey) < 0,
             mesh.element_id(e.ex, e.ey - 1) < 0,
             mesh.element_id(e.ex, e.ey + 1) < 0};

  std::array<Combo, 16> combos;
  std::vector<int> support;
  for (int b = 0; b < 4; ++b) {
    for (int a = 0; a < 4; ++a) {
      combos[b * 4 + a] = r.resolve(e.ex - 1 + a, e.ey - 1 + b, 0);
      for (const auto& [vid, w] : combos[b * 4 + a]) {
        (void)w;
        if (std::find(support.begin(), support.end(), vid) == support.end())
          support.push_back(vid);
      }
    }
  }
  std::sort(support.begin(), support.end());

  ElementStencil st;
  st.support = std::move(support);
  st.fold = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(st.support.size()), 16);
  for (int slot = 0; slot < 16; ++slot) {
    for (const auto& [vid, w] : combos[slot]) {
      const auto it = std::lower_bound(st.support.begin(), st.support.end(), vid);
      st.fold(it - st.support.begin(), slot) += w;
    }
  }
  return st;
}

BasisPointData basis_point_data(const ParametricMesh& mesh,
                                const ElementStencil& stencil, int element,
                                double s, double t) {
  if (s < -1e-12 || s > 1.0 + 1e-12 || t < -1e-12 || t > 1.0 + 1e-12)
    throw Error("reference point outside the element");
  const double sx = static_cast<double>(mesh.nx);
  const double sy = static_cast<double>(mesh.ny);
  (void)element;

  double na[4], dna[4], d2na[4];
  double nb[4], dnb[4], d2nb[4];
  bspline_segment(std::clamp(s, 0.0, 1.0), na, dna, d2na);
  bspline_segment(std::clamp(t, 0.0, 1.0), nb, dnb, d2nb);

  Eigen::Matrix<double, 16, 1> v, g1, g2, h11, h22, h12;
  for (int b = 0; b < 4; ++b) {
    for (int a = 0; a < 4; ++a) {
      const int slot = b * 4 + a;
      v[slot] = na[a] * nb[b];
      g1[slot] = dna[a] * nb[b] * sx;
      g2[slot] = na[a] * dnb[b] * sy;
      h11[slot] = d2na[a] * nb[b] * sx * sx;
      h22[slot] = na[a] * d2nb[b] * sy * sy;
      h12[slot] = dna[a] * dnb[b] * sx * sy;
    }
  }

  const Eigen::VectorXd fv = stencil.fold * v;
  const Eigen::VectorXd f1 = stencil.fold * g1;
  const Eigen::VectorXd f2 = stencil.fold * g2;
  const Eigen::VectorXd f11 = stencil.fold * h11;
  const Eigen::VectorXd f22 = stencil.fold * h22;
  const Eigen::VectorXd f12 = stencil.fold * h12;

  BasisPointData out;
  const std::size_t n = stencil.support.size();
  out.values.resize(n);
  out.d1.resize(n);
  out.d2.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = fv[static_cast<Eigen::Index>(k)];
    out.d1[k] = {f1[static_cast<Eigen::Index>(k)], f2[static_cast<Eigen::Index>(k)]};
    out.d2[k] = {f11[static_cast<Eigen::Index>(k)], f22[static_cast<Eigen::Index>(k)],
                 f12[static_cast<Eigen::Index>(k)]};
  }
  return out;
}

BasisEvaluation element_basis(const ParametricMesh& mesh, int element,
                              double s, double t) {
  const ElementStencil st = build_element_stencil(mesh, element);
  BasisPointData data = basis_point_data(mesh, st, element, s, t);
  BasisEvaluation ev;
  ev.support = st.support;
  ev.values = std::move(data.values);
  ev.d1 = std::move(data.d1);
  ev.d2 = std::move(data.d2);
  return ev;
}

MeshBasisCache build_basis_cache(const ParametricMesh& mesh,
                                 const QuadratureRule& rule) {
  MeshBasisCache cache;
  cache.rule = rule;
  cache.elements.reserve(mesh.elements.size());
  for (int e = 0; e < mesh.element_count(); ++e) {
    ElementBasisCache ec;
    ec.stencil = build_element_stencil(mesh, e);
    ec.gauss.reserve(rule.points.size());
    for (const auto& pt : rule.points)
      ec.gauss.push_back(basis_point_data(mesh, ec.stencil, e, pt[0], pt[1]));
    cache.elements.push_back(std::move(ec));
  }
  return cache;
}

}  // namespace shellopt::geometry
