#pragma once

#include <vector>

#include <Eigen/Dense>

#include "shellopt/fem/kinematics.hpp"
#include "shellopt/fem/model.hpp"
#include "shellopt/geometry/basis.hpp"

namespace shellopt::fem {

struct Material {
  double thickness;
  double youngs_modulus;
  double poisson;
  double membrane_factor() const {
    return youngs_modulus * thickness / (1.0 - poisson * poisson);
  }
  double bending_factor() const {
    return youngs_modulus * thickness * thickness * thickness /
           (12.0 * (1.0 - poisson * poisson));
  }
};

template <class T>
inline double value_of(const T& x) {
  return x.value;
}
template <>
inline double value_of<double>(const double& x) {
  return x;
}

// Strain-displacement rows at one quadrature point: 3 x 3n matrices mapping
// stacked vertex displacements to (11, 22, 2*12) strain components.
template <class T>
void strain_operators(const geometry::BasisPointData& bp,
                      const SurfaceFrameT<T>& f,
                      Eigen::Matrix<T, 3, Eigen::Dynamic>& bm,
                      Eigen::Matrix<T, 3, Eigen::Dynamic>& bb) {
  using V3 = Eigen::Matrix<T, 3, 1>;
  const int n = static_cast<int>(bp.values.size());
  bm.setZero(3, 3 * n);
  bb.setZero(3, 3 * n);

  const T inv = T(1.0) / f.sqrt_a;
  const V3 a2xa3 = f.a2.cross(f.a3);
  const V3 a3xa1 = f.a3.cross(f.a1);
  const V3 d11xa2 = f.d11.cross(f.a2);
  const V3 d22xa2 = f.d22.cross(f.a2);
  const V3 d12xa2 = f.d12.cross(f.a2);
  const V3 a1xd11 = f.a1.cross(f.d11);
  const V3 a1xd22 = f.a1.cross(f.d22);
  const V3 a1xd12 = f.a1.cross(f.d12);
  const T n11 = f.a3.dot(f.d11) * inv;
  const T n22 = f.a3.dot(f.d22) * inv;
  const T n12 = f.a3.dot(f.d12) * inv;

  for (int k = 0; k < n; ++k) {
    const double g1 = bp.d1[k][0];
    const double g2 = bp.d1[k][1];
    const double h11 = bp.d2[k][0];
    const double h22 = bp.d2[k][1];
    const double h12 = bp.d2[k][2];
    for (int c = 0; c < 3; ++c) {
      const int col = 3 * k + c;
      bm(0, col) = g1 * f.a1[c];
      bm(1, col) = g2 * f.a2[c];
      bm(2, col) = g2 * f.a1[c] + g1 * f.a2[c];

      const T drill = g1 * a2xa3[c] + g2 * a3xa1[c];
      bb(0, col) = -h11 * f.a3[c] + inv * (g1 * d11xa2[c] + g2 * a1xd11[c]) +
                   n11 * drill;
      bb(1, col) = -h22 * f.a3[c] + inv * (g1 * d22xa2[c] + g2 * a1xd22[c]) +
                   n22 * drill;
      bb(2, col) = 2.0 * (-h12 * f.a3[c] +
                          inv * (g1 * d12xa2[c] + g2 * a1xd12[c]) +
                          n12 * drill);
    }
  }
}

// Element stiffness over the cached quadrature data.  CoordFn maps a support
// slot index to a 3-vector of scalar type T.
template <class T, class CoordFn>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> element_stiffness_T(
    const geometry::ElementBasisCache& ec, const geometry::QuadratureRule& rule,
    double jac_par, const Material& mat, CoordFn&& coord, int element) {
  const int n = static_cast<int>(ec.stencil.support.size());
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> k =
      Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(3 * n, 3 * n);
  Eigen::Matrix<T, 3, Eigen::Dynamic> bm, bb;
  const double cm = mat.membrane_factor();
  const double cb = mat.bending_factor();
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const auto f = surface_frame<T>(ec.gauss[q], coord, n);
    if (!(value_of(f.sqrt_a) > 1e-14))
      throw SingularGeometryError(element, value_of(f.sqrt_a));
    strain_operators(ec.gauss[q], f, bm, bb);
    const Eigen::Matrix<T, 3, 3> c = constitutive_voigt(f, mat.poisson);
    const T scale = rule.weights[q] * jac_par * f.sqrt_a;
    k += (scale * cm) * (bm.transpose() * c * bm) +
         (scale * cb) * (bb.transpose() * c * bb);
  }
  return k;
}

// Twice the element strain energy of a frozen displacement, u^T K_e u,
// evaluated through strain vectors so derivative scalars stay cheap.
template <class T, class CoordFn>
T element_energy2_T(const geometry::ElementBasisCache& ec,
                    const geometry::QuadratureRule& rule, double jac_par,
                    const Material& mat, CoordFn&& coord,
                    const Eigen::VectorXd& u_e, int element) {
  const int n = static_cast<int>(ec.stencil.support.size());
  const double cm = mat.membrane_factor();
  const double cb = mat.bending_factor();
  T energy2(0.0);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const auto& bp = ec.gauss[q];
    Eigen::Vector3d du1 = Eigen::Vector3d::Zero();
    Eigen::Vector3d du2 = Eigen::Vector3d::Zero();
    Eigen::Vector3d du11 = Eigen::Vector3d::Zero();
    Eigen::Vector3d du22 = Eigen::Vector3d::Zero();
    Eigen::Vector3d du12 = Eigen::Vector3d::Zero();
    for (int k = 0; k < n; ++k) {
      const Eigen::Vector3d uk = u_e.segment<3>(3 * k);
      du1 += bp.d1[k][0] * uk;
      du2 += bp.d1[k][1] * uk;
      du11 += bp.d2[k][0] * uk;
      du22 += bp.d2[k][1] * uk;
      du12 += bp.d2[k][2] * uk;
    }
    const auto f = surface_frame<T>(bp, coord, n);
    if (!(value_of(f.sqrt_a) > 1e-14))
      throw SingularGeometryError(element, value_of(f.sqrt_a));
    const Eigen::Matrix<T, 3, 3> c = constitutive_voigt(f, mat.poisson);
    const auto em = membrane_strain(f, du1, du2);
    const auto eb = bending_strain(f, du1, du2, du11, du22, du12);
    const T scale = rule.weights[q] * jac_par * f.sqrt_a;
    energy2 += scale * (cm * em.dot(c * em) + cb * eb.dot(c * eb));
  }
  return energy2;
}

template <class T, class CoordFn>
T element_area_T(const geometry::ElementBasisCache& ec,
                 const geometry::QuadratureRule& rule, double jac_par,
                 CoordFn&& coord, int element) {
  const int n = static_cast<int>(ec.stencil.support.size());
  T area(0.0);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const auto f = surface_frame<T>(ec.gauss[q], coord, n);
    if (!(value_of(f.sqrt_a) > 1e-14))
      throw SingularGeometryError(element, value_of(f.sqrt_a));
    area += rule.weights[q] * jac_par * f.sqrt_a;
  }
  return area;
}

struct ElementStiffness {
  std::vector<int> support;  // vertex ids
  Eigen::MatrixXd k;         // (3 support) x (3 support)
};

// Public double-precision entry points.
SurfaceFrame surface_metrics(const ShellModel& model, int element, double s,
                             double t);
ElementStiffness element_stiffness(const ShellModel& model,
                                   const geometry::MeshBasisCache& cache,
                                   int element);

}  // namespace shellopt::fem
