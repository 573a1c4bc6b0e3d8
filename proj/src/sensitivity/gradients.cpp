#include "shellopt/sensitivity/gradients.hpp"

#include <algorithm>

#include "shellopt/errors.hpp"
#include "shellopt/fem/element.hpp"
#include "shellopt/sensitivity/dual.hpp"

namespace shellopt::sensitivity {

namespace {

using DualV3 = Eigen::Matrix<Dual, 3, 1>;

// Coordinate lookup seeding a unit derivative on one (slot, coord) entry.
struct SeededCoords {
  const fem::ShellModel& model;
  const std::vector<int>& support;
  int seed_slot;
  int seed_coord;

  DualV3 operator()(int k) const {
    const Eigen::Vector3d& x = model.coords[support[k]];
    DualV3 p;
    p[0] = Dual(x[0]);
    p[1] = Dual(x[1]);
    p[2] = Dual(x[2]);
    if (k == seed_slot) p[seed_coord].deriv = 1.0;
    return p;
  }
};

double parametric_jacobian(const fem::ShellModel& m) {
  return 1.0 / (static_cast<double>(m.mesh.nx) * m.mesh.ny);
}

}  // namespace

Eigen::MatrixXd element_stiffness_derivative(
    const fem::ShellModel& model, const geometry::MeshBasisCache& cache,
    int element, int vertex, int coord) {
  const auto& ec = cache.elements.at(element);
  const auto& support = ec.stencil.support;
  const int n = static_cast<int>(support.size());
  const auto it = std::find(support.begin(), support.end(), vertex);
  if (it == support.end()) return Eigen::MatrixXd::Zero(3 * n, 3 * n);

  const fem::Material mat{model.thickness, model.youngs_modulus, model.poisson};
  const auto k = fem::element_stiffness_T<Dual>(
      ec, cache.rule, parametric_jacobian(model), mat,
      SeededCoords{model, support, static_cast<int>(it - support.begin()),
                   coord},
      element);
  Eigen::MatrixXd dk(3 * n, 3 * n);
  for (int r = 0; r < 3 * n; ++r)
    for (int c = 0; c < 3 * n; ++c) dk(r, c) = k(r, c).deriv;
  return dk;
}

Eigen::VectorXd compliance_gradient_x(const fem::ShellModel& model,
                                      const geometry::MeshBasisCache& cache,
                                      const fem::GlobalSystem& system) {
  const auto& mesh = model.mesh;
  if (system.displacement.size() != model.dof_count())
    throw Error("compliance gradient: displacement size does not match model");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(model.dof_count());
  const double jac = parametric_jacobian(model);
  const fem::Material mat{model.thickness, model.youngs_modulus, model.poisson};

  Eigen::VectorXd u_e;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& ec = cache.elements[e];
    const auto& support = ec.stencil.support;
    const int n = static_cast<int>(support.size());
    u_e.resize(3 * n);
    for (int k = 0; k < n; ++k)
      u_e.segment<3>(3 * k) = system.displacement.segment<3>(3 * support[k]);
    if (u_e.isZero(0.0)) continue;
    for (int k = 0; k < n; ++k) {
      for (int c = 0; c < 3; ++c) {
        const Dual e2 = fem::element_energy2_T<Dual>(
            ec, cache.rule, jac, mat, SeededCoords{model, support, k, c}, u_e,
            e);
        g[3 * support[k] + c] -= e2.deriv;
      }
    }
  }
  return g;
}

Eigen::VectorXd area_gradient_x(const fem::ShellModel& model,
                                const geometry::MeshBasisCache& cache) {
  const auto& mesh = model.mesh;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(model.dof_count());
  const double jac = parametric_jacobian(model);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& ec = cache.elements[e];
    const auto& support = ec.stencil.support;
    const int n = static_cast<int>(support.size());
    for (int k = 0; k < n; ++k) {
      for (int c = 0; c < 3; ++c) {
        const Dual a = fem::element_area_T<Dual>(
            ec, cache.rule, jac, SeededCoords{model, support, k, c}, e);
        g[3 * support[k] + c] += a.deriv;
      }
    }
  }
  return g;
}

SensitivityBundle chain_to_theta(const Eigen::VectorXd& dJ_dx,
                                 const Eigen::VectorXd& dA_dx, double thickness,
                                 const Eigen::MatrixXd& jacobian,
                                 nrep::OutputMode mode) {
  if (dJ_dx.size() != dA_dx.size())
    throw Error("chain_to_theta: gradient lengths differ");
  if (dJ_dx.size() % 3 != 0)
    throw Error("chain_to_theta: gradients must hold 3 entries per vertex");
  const Eigen::Index n_v = dJ_dx.size() / 3;
  const Eigen::Index rows =
      mode == nrep::OutputMode::heightfield ? n_v : 3 * n_v;
  if (jacobian.rows() != rows)
    throw Error("chain_to_theta: jacobian rows do not match the output mode");

  SensitivityBundle b;
  b.dJ_dx = dJ_dx;
  b.dA_dx = dA_dx;
  if (mode == nrep::OutputMode::heightfield) {
    Eigen::VectorXd wj(n_v), wa(n_v);
    for (Eigen::Index p = 0; p < n_v; ++p) {
      wj[p] = dJ_dx[3 * p + 2];
      wa[p] = dA_dx[3 * p + 2];
    }
    b.dJ_dtheta = jacobian.transpose() * wj;
    b.dV_dtheta = thickness * (jacobian.transpose() * wa);
  } else {
    b.dJ_dtheta = jacobian.transpose() * dJ_dx;
    b.dV_dtheta = thickness * (jacobian.transpose() * dA_dx);
  }
  if (!b.dJ_dtheta.allFinite() || !b.dV_dtheta.allFinite())
    throw Error("chain_to_theta: non-finite sensitivity entries");
  return b;
}

}  // namespace shellopt::sensitivity
