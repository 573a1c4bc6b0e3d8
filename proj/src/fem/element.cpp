#include "shellopt/fem/element.hpp"

namespace shellopt::fem {

SurfaceFrame surface_metrics(const ShellModel& model, int element, double s,
                             double t) {
  const auto st = geometry::build_element_stencil(model.mesh, element);
  const auto bp = geometry::basis_point_data(model.mesh, st, element, s, t);
  const auto frame = surface_frame<double>(
      bp, [&](int k) { return model.coords[st.support[k]]; },
      static_cast<int>(st.support.size()));
  if (!(frame.sqrt_a > 1e-14))
    throw SingularGeometryError(element, frame.sqrt_a);
  return frame;
}

ElementStiffness element_stiffness(const ShellModel& model,
                                   const geometry::MeshBasisCache& cache,
                                   int element) {
  const auto& ec = cache.elements.at(element);
  const double jac = 1.0 / (static_cast<double>(model.mesh.nx) * model.mesh.ny);
  const Material mat{model.thickness, model.youngs_modulus, model.poisson};
  ElementStiffness out;
  out.support = ec.stencil.support;
  out.k = element_stiffness_T<double>(
      ec, cache.rule, jac, mat,
      [&](int k) { return model.coords[ec.stencil.support[k]]; }, element);
  return out;
}

}  // namespace shellopt::fem
