#include "shellopt/fem/system.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

namespace shellopt::fem {

namespace {

double parametric_jacobian(const ShellModel& m) {
  return 1.0 / (static_cast<double>(m.mesh.nx) * m.mesh.ny);
}

}  // namespace

Eigen::VectorXd load_vector(const ShellModel& model,
                            const geometry::MeshBasisCache& cache) {
  const auto& mesh = model.mesh;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(model.dof_count());
  const double plan = model.extents[0] * model.extents[1];
  const double jac = parametric_jacobian(model) * plan;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& ec = cache.elements[e];
    const auto& el = mesh.elements[e];
    for (std::size_t q = 0; q < cache.rule.points.size(); ++q) {
      const double eta1 = (el.ex + cache.rule.points[q][0]) / mesh.nx;
      const double eta2 = (el.ey + cache.rule.points[q][1]) / mesh.ny;
      Eigen::Vector3d traction = Eigen::Vector3d::Zero();
      for (const auto& r : model.loads) {
        if (eta1 >= r.rect[0] && eta1 <= r.rect[2] && eta2 >= r.rect[1] &&
            eta2 <= r.rect[3])
          traction += r.traction;
      }
      if (traction.isZero()) continue;
      const double scale = cache.rule.weights[q] * jac;
      const auto& bp = ec.gauss[q];
      for (std::size_t k = 0; k < ec.stencil.support.size(); ++k) {
        const int v = ec.stencil.support[k];
        f.segment<3>(3 * v) += scale * bp.values[k] * traction;
      }
    }
  }
  for (const auto& [v, force] : model.point_loads) f.segment<3>(3 * v) += force;
  return f;
}

Eigen::SparseMatrix<double> assemble_stiffness(
    const ShellModel& model, const geometry::MeshBasisCache& cache) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(model.mesh.element_count()) * 48 * 48);
  for (int e = 0; e < model.mesh.element_count(); ++e) {
    const ElementStiffness es = element_stiffness(model, cache, e);
    const int n = static_cast<int>(es.support.size());
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int ca = 0; ca < 3; ++ca) {
          for (int cb = 0; cb < 3; ++cb) {
            trips.emplace_back(3 * es.support[a] + ca, 3 * es.support[b] + cb,
                               es.k(3 * a + ca, 3 * b + cb));
          }
        }
      }
    }
  }
  Eigen::SparseMatrix<double> k(model.dof_count(), model.dof_count());
  k.setFromTriplets(trips.begin(), trips.end());
  return k;
}

GlobalSystem assemble_and_solve(const ShellModel& model,
                                const geometry::MeshBasisCache& cache) {
  model.validate();
  GlobalSystem sys;
  sys.stiffness = assemble_stiffness(model, cache);
  sys.load = load_vector(model, cache);

  const int ndof = model.dof_count();
  sys.fixed.assign(ndof, 0);
  Eigen::VectorXd full = Eigen::VectorXd::Zero(ndof);
  for (int v = 0; v < model.mesh.vertex_count(); ++v) {
    for (int c = 0; c < 3; ++c) {
      if (model.supports[v][c]) {
        sys.fixed[3 * v + c] = 1;
        full[3 * v + c] = model.prescribed[v][c];
      }
    }
  }

  std::vector<int> free_of_dof(ndof, -1);
  std::vector<int> dof_of_free;
  dof_of_free.reserve(ndof);
  for (int d = 0; d < ndof; ++d) {
    if (!sys.fixed[d]) {
      free_of_dof[d] = static_cast<int>(dof_of_free.size());
      dof_of_free.push_back(d);
    }
  }
  const int nfree = static_cast<int>(dof_of_free.size());
  if (nfree == 0) {
    sys.displacement = full;
    return sys;
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(sys.stiffness.nonZeros());
  Eigen::VectorXd rhs(nfree);
  for (int i = 0; i < nfree; ++i) rhs[i] = sys.load[dof_of_free[i]];
  for (int col = 0; col < sys.stiffness.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, col); it;
         ++it) {
      const int fr = free_of_dof[it.row()];
      const int fc = free_of_dof[it.col()];
      if (fr >= 0 && fc >= 0) {
        trips.emplace_back(fr, fc, it.value());
      } else if (fr >= 0 && fc < 0) {
        rhs[fr] -= it.value() * full[it.col()];
      }
    }
  }
  Eigen::SparseMatrix<double> kr(nfree, nfree);
  kr.setFromTriplets(trips.begin(), trips.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(kr);
  Eigen::VectorXd u;
  bool bad = solver.info() != Eigen::Success;
  if (!bad) {
    u = solver.solve(rhs);
    bad = !u.allFinite();
  }
  double rel = 0.0;
  if (!bad) {
    const double fnorm = rhs.norm();
    rel = (kr * u - rhs).norm() / (fnorm > 0.0 ? fnorm : 1.0);
    bad = rel > 1e-8;
  }
  if (bad) {
    // count (near-)zero pivots to report how many modes are unconstrained
    int modes = 0;
    if (solver.info() == Eigen::Success) {
      const Eigen::VectorXd d = solver.vectorD();
      const double dmax = d.cwiseAbs().maxCoeff();
      for (int i = 0; i < d.size(); ++i)
        if (!(std::abs(d[i]) > 1e-12 * dmax)) ++modes;
    }
    throw SingularSystemError(modes > 0 ? modes : 1);
  }

  for (int i = 0; i < nfree; ++i) full[dof_of_free[i]] = u[i];
  sys.displacement = full;
  sys.solve_residual = rel;
  return sys;
}

GlobalSystem assemble_and_solve(const ShellModel& model) {
  const auto cache =
      geometry::build_basis_cache(model.mesh, geometry::default_quadrature());
  return assemble_and_solve(model, cache);
}

double compliance(const GlobalSystem& system) {
  return system.displacement.dot(system.stiffness * system.displacement);
}

std::pair<double, double> area_and_volume(
    const ShellModel& model, const geometry::MeshBasisCache& cache) {
  const double jac = parametric_jacobian(model);
  double area = 0.0;
  for (int e = 0; e < model.mesh.element_count(); ++e) {
    const auto& ec = cache.elements[e];
    area += element_area_T<double>(
        ec, cache.rule, jac,
        [&](int k) { return model.coords[ec.stencil.support[k]]; }, e);
  }
  return {area, area * model.thickness};
}

std::pair<double, double> area_and_volume(const ShellModel& model) {
  const auto cache =
      geometry::build_basis_cache(model.mesh, geometry::default_quadrature());
  return area_and_volume(model, cache);
}

}  // namespace shellopt::fem
