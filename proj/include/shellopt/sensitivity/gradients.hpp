#pragma once

#include <Eigen/Dense>

#include "shellopt/fem/model.hpp"
#include "shellopt/fem/system.hpp"
#include "shellopt/nrep/network.hpp"

namespace shellopt::sensitivity {

// FE-level gradients plus their chained counterparts over network parameters.
// dJ_dx and dA_dx are vertex-major (x, y, z per vertex, length 3 n_v).
struct SensitivityBundle {
  Eigen::VectorXd dJ_dx;
  Eigen::VectorXd dA_dx;
  Eigen::VectorXd dJ_dtheta;
  Eigen::VectorXd dV_dtheta;
};

// Derivative of one element stiffness matrix with respect to a single vertex
// coordinate (coord in {0,1,2}).  Zero when the vertex is outside the
// element's support.
Eigen::MatrixXd element_stiffness_derivative(
    const fem::ShellModel& model, const geometry::MeshBasisCache& cache,
    int element, int vertex, int coord);

// Compliance gradient for a solved system with geometry-independent loads:
// dJ/dx_i = -sum_e u_e^T (dK_e/dx_i) u_e.
Eigen::VectorXd compliance_gradient_x(const fem::ShellModel& model,
                                      const geometry::MeshBasisCache& cache,
                                      const fem::GlobalSystem& system);

// Exact gradient of the quadrature-evaluated mid-surface area.
Eigen::VectorXd area_gradient_x(const fem::ShellModel& model,
                                const geometry::MeshBasisCache& cache);

// Chain FE gradients through the network parameter Jacobian (row layout
// p*n_out+o).  In heightfield mode only the z components participate; the
// Jacobian then has one row per vertex.  dV/dtheta = t * (dA/dx)^T (dx/dtheta).
SensitivityBundle chain_to_theta(const Eigen::VectorXd& dJ_dx,
                                 const Eigen::VectorXd& dA_dx, double thickness,
                                 const Eigen::MatrixXd& jacobian,
                                 nrep::OutputMode mode);

}  // namespace shellopt::sensitivity
