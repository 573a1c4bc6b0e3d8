#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "shellopt/fem/element.hpp"
#include "shellopt/fem/model.hpp"

namespace shellopt::fem {

struct GlobalSystem {
  Eigen::SparseMatrix<double> stiffness;  // full, symmetric, all dofs
  Eigen::VectorXd load;                   // consistent applied load
  Eigen::VectorXd displacement;           // prescribed values on fixed dofs
  std::vector<char> fixed;                // per dof
  double solve_residual = 0.0;            // relative, on the reduced system
};

// Consistent load vector: integrates region tractions against the basis over
// the fixed plan measure (extents product), then adds point loads.
Eigen::VectorXd load_vector(const ShellModel& model,
                            const geometry::MeshBasisCache& cache);

Eigen::SparseMatrix<double> assemble_stiffness(
    const ShellModel& model, const geometry::MeshBasisCache& cache);

// Assemble, reduce by the supports, and solve with a sparse Cholesky
// factorisation.  Throws SingularSystemError when the reduced matrix is not
// positive definite, reporting the number of zero-stiffness modes seen.
GlobalSystem assemble_and_solve(const ShellModel& model,
                                const geometry::MeshBasisCache& cache);
GlobalSystem assemble_and_solve(const ShellModel& model);

double compliance(const GlobalSystem& system);

// Mid-surface area and material volume (area times thickness).
std::pair<double, double> area_and_volume(const ShellModel& model,
                                          const geometry::MeshBasisCache& cache);
std::pair<double, double> area_and_volume(const ShellModel& model);

}  // namespace shellopt::fem
