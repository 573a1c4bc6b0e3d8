#pragma once

#include <Eigen/Dense>

#include "shellopt/geometry/basis.hpp"

namespace shellopt::fem {

// Mid-surface differential geometry at one quadrature point, templated on the
// scalar so forward-mode derivative types can flow through.
template <class T>
struct SurfaceFrameT {
  Eigen::Matrix<T, 3, 1> a1, a2;    // covariant tangents
  Eigen::Matrix<T, 3, 1> a3;        // unit normal
  Eigen::Matrix<T, 3, 1> d11, d22, d12;  // second parametric derivatives
  T sqrt_a;                         // |a1 x a2|
  T m11, m22, m12;                  // contravariant metric a^{ab}
  Eigen::Matrix<T, 3, 1> a1_con, a2_con;
};

using SurfaceFrame = SurfaceFrameT<double>;

template <class T, class CoordFn>
SurfaceFrameT<T> surface_frame(const geometry::BasisPointData& bp,
                               CoordFn&& coord, int n) {
  using V3 = Eigen::Matrix<T, 3, 1>;
  SurfaceFrameT<T> f;
  f.a1 = V3::Zero();
  f.a2 = V3::Zero();
  f.d11 = V3::Zero();
  f.d22 = V3::Zero();
  f.d12 = V3::Zero();
  for (int k = 0; k < n; ++k) {
    const V3 x = coord(k);
    f.a1 += bp.d1[k][0] * x;
    f.a2 += bp.d1[k][1] * x;
    f.d11 += bp.d2[k][0] * x;
    f.d22 += bp.d2[k][1] * x;
    f.d12 += bp.d2[k][2] * x;
  }
  const V3 cr = f.a1.cross(f.a2);
  using std::sqrt;
  f.sqrt_a = sqrt(cr.dot(cr));
  f.a3 = cr / f.sqrt_a;
  const T a11 = f.a1.dot(f.a1);
  const T a22 = f.a2.dot(f.a2);
  const T a12 = f.a1.dot(f.a2);
  const T det = a11 * a22 - a12 * a12;
  f.m11 = a22 / det;
  f.m22 = a11 / det;
  f.m12 = -a12 / det;
  f.a1_con = f.m11 * f.a1 + f.m12 * f.a2;
  f.a2_con = f.m12 * f.a1 + f.m22 * f.a2;
  return f;
}

// Plane-stress style constitutive contraction in contravariant components,
// Voigt order (11, 22, 12) with the shear slot carrying the doubled strain.
// Multiply by E t/(1-nu^2) for the membrane part and E t^3/(12 (1-nu^2)) for
// the bending part.
template <class T>
Eigen::Matrix<T, 3, 3> constitutive_voigt(const SurfaceFrameT<T>& f,
                                          double nu) {
  Eigen::Matrix<T, 3, 3> c;
  c(0, 0) = f.m11 * f.m11;
  c(1, 1) = f.m22 * f.m22;
  c(0, 1) = c(1, 0) = nu * (f.m11 * f.m22) + (1.0 - nu) * (f.m12 * f.m12);
  c(0, 2) = c(2, 0) = f.m11 * f.m12;
  c(1, 2) = c(2, 1) = f.m22 * f.m12;
  c(2, 2) = 0.5 * ((1.0 - nu) * (f.m11 * f.m22) + (1.0 + nu) * (f.m12 * f.m12));
  return c;
}

// Membrane strain of a displacement whose parametric derivatives at the point
// are du1, du2: (a1.u,1, a2.u,2, a1.u,2 + a2.u,1).
template <class T>
Eigen::Matrix<T, 3, 1> membrane_strain(const SurfaceFrameT<T>& f,
                                       const Eigen::Vector3d& du1,
                                       const Eigen::Vector3d& du2) {
  Eigen::Matrix<T, 3, 1> e;
  e[0] = f.a1.dot(du1.cast<T>());
  e[1] = f.a2.dot(du2.cast<T>());
  e[2] = f.a1.dot(du2.cast<T>()) + f.a2.dot(du1.cast<T>());
  return e;
}

// Linearised bending strain (11, 22, 2*12) for displacement derivatives du1,
// du2 and second derivatives duab.
template <class T>
Eigen::Matrix<T, 3, 1> bending_strain(const SurfaceFrameT<T>& f,
                                      const Eigen::Vector3d& du1,
                                      const Eigen::Vector3d& du2,
                                      const Eigen::Vector3d& du11,
                                      const Eigen::Vector3d& du22,
                                      const Eigen::Vector3d& du12) {
  using V3 = Eigen::Matrix<T, 3, 1>;
  const V3 u1 = du1.cast<T>();
  const V3 u2 = du2.cast<T>();
  const T inv = T(1.0) / f.sqrt_a;
  const V3 a2xa3 = f.a2.cross(f.a3);
  const V3 a3xa1 = f.a3.cross(f.a1);
  const T drill = u1.dot(a2xa3) + u2.dot(a3xa1);

  auto row = [&](const V3& dab, const Eigen::Vector3d& duab) -> T {
    return -duab.cast<T>().dot(f.a3) +
           inv * (u1.dot(dab.cross(f.a2)) + u2.dot(f.a1.cross(dab))) +
           (f.a3.dot(dab) * inv) * drill;
  };
  Eigen::Matrix<T, 3, 1> b;
  b[0] = row(f.d11, du11);
  b[1] = row(f.d22, du22);
  b[2] = 2.0 * row(f.d12, du12);
  return b;
}

}  // namespace shellopt::fem
