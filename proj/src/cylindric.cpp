#include "zonobasis/cylindric.hpp"

namespace zonobasis {

CylindricSet::CylindricSet(Zonotope source, Zonotope base, GeometryTolerances tol)
    : source_(std::move(source)), base_(std::move(base)), tol_(tol) {
  if (base_.dim() + 1 != source_.dim())
    throw Error(ErrorKind::DimensionMismatch, "cylinder base must have dim-1 coordinates");
}

bool CylindricSet::try_floor(const Vector& x, double& out) const {
  Fiber f;
  if (!try_fiber(source_, x, f, tol_)) return false;
  out = f.a;
  return true;
}

double CylindricSet::floor(const Vector& x) const {
  return zonobasis::fiber(source_, x, tol_).a;
}

Fiber CylindricSet::fiber(const Vector& x) const {
  const double phi = floor(x);
  return {phi - 0.5, phi + 0.5};
}

bool CylindricSet::contains(const Vector& p) const {
  if (p.size() != dim())
    throw Error(ErrorKind::DimensionMismatch, "point dimension differs from cylinder");
  double phi = 0.0;
  if (!try_floor(p.head(dim() - 1), phi)) return false;
  const double y = p(dim() - 1);
  return y >= phi - 0.5 - tol_.lp && y <= phi + 0.5 + tol_.lp;
}

double CylindricSet::volume() const {
  return base_.dim() == 0 ? 1.0 : zonobasis::volume(base_);
}

CylindricSet build_cylindric(const Zonotope& previous, const GeometryTolerances& tol) {
  if (previous.dim() < 2)
    throw Error(ErrorKind::InvalidInput, "cylindric set needs dimension >= 2");
  Zonotope base = project_base(previous, tol);
  if (base.rank() < base.dim())
    throw Error(ErrorKind::RankDeficient, "cylinder base is degenerate");
  return CylindricSet(previous, std::move(base), tol);
}

} // namespace zonobasis
