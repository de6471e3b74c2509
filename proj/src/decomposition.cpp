#include "zonobasis/decomposition.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "zonobasis/parallel.hpp"

namespace zonobasis {

long half_shift(const GridSpec& grid) {
  const int d = grid.dim();
  const double dy = grid.step(d - 1);
  const double s = 0.5 / dy;
  const double r = std::round(s);
  if (r < 1.0 || std::abs(s - r) > 1e-9 * std::max(1.0, s)) {
    std::ostringstream os;
    os << "y-spacing " << dy << " does not divide 1/2; spacing must be 1/(2k) (e.g. "
       << 0.5 / std::max(1.0, std::ceil(s)) << ")";
    throw Error(ErrorKind::GridMisaligned, os.str());
  }
  return static_cast<long>(r);
}

namespace {

const Complex kTwoI(0.0, 2.0);

void check_alignment(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw Error(ErrorKind::GridMismatch, "grid functions live on different grids");
}

std::string describe_cell(const GridSpec& grid, long idx) {
  std::ostringstream os;
  os << "cell " << idx << " at (" << grid.center(idx).transpose() << ")";
  return os.str();
}

} // namespace

Decomposition decompose(const GridFunction& f, const Zonotope& omega,
                        const DecompositionOptions& options) {
  const int d = omega.dim();
  if (d < 2) throw Error(ErrorKind::InvalidInput, "decomposition needs dimension >= 2");
  if (f.grid.dim() != d)
    throw Error(ErrorKind::DimensionMismatch, "grid dimension differs from the zonotope");
  const int n = omega.count();
  if (n < 2) throw Error(ErrorKind::InvalidInput, "decomposition needs at least two generators");
  const Vector last = omega.generators().col(n - 1);
  if ((last - Vector::Unit(d, d - 1)).lpNorm<Eigen::Infinity>() > 1e-12)
    throw Error(ErrorKind::InvalidInput, "last generator must be the unit vector e_d");
  const Zonotope previous(omega.generators().leftCols(n - 1), omega.center());
  if (previous.rank() < d)
    throw Error(ErrorKind::RankDeficient, "the first n-1 generators must span");
  const CylindricSet sigma = build_cylindric(previous, options.tol);
  const long s = half_shift(f.grid);

  long first_bad = -1;
  if (support_violations(f, omega, options.support_zero, &first_bad, options.tol.lp) > 0)
    throw Error(ErrorKind::SupportViolation,
                "input is nonzero outside the zonotope: " + describe_cell(f.grid, first_bad));

  const GridSpec& grid = f.grid;
  const long columns = grid.columns();
  const long ny = grid.n.back();
  const double ylo = grid.lo(d - 1);
  const double dy = grid.step(d - 1);

  std::vector<Fiber> fibers(static_cast<std::size_t>(columns));
  std::vector<char> inside(static_cast<std::size_t>(columns), 0);
  double max_length = 0.0;
  for (long c = 0; c < columns; ++c) {
    Fiber fb;
    if (try_fiber(previous, grid.column_point(c), fb, options.tol)) {
      fibers[static_cast<std::size_t>(c)] = fb;
      inside[static_cast<std::size_t>(c)] = 1;
      max_length = std::max(max_length, fb.length());
    }
  }
  const int terms = static_cast<int>(std::ceil(max_length)) + 1 + options.extra_terms;

  Decomposition out;
  out.g = GridFunction(grid, sigma);
  out.h = GridFunction(grid, previous);
  out.max_fiber_length = max_length;
  out.terms = terms;

  parallel_for(static_cast<int>(columns), options.threads, [&](int ci) {
    const long c = ci;
    const long base = c * ny;
    if (!inside[static_cast<std::size_t>(c)]) {
      for (long j = 0; j < ny; ++j) out.g[base + j] = f[base + j];
      return;
    }
    const double phi = fibers[static_cast<std::size_t>(c)].a;
    for (long j = 0; j < ny; ++j) {
      const double y = ylo + (static_cast<double>(j) + 0.5) * dy;
      Complex sum = 0.0;
      if (y <= phi + options.tol.lp) {
        for (int k = 0; k < terms; ++k) {
          const long src = j - s - 2 * s * k;
          if (src < 0) break;
          sum += f[base + src];
        }
        out.h[base + j] = kTwoI * sum;
      } else {
        for (int k = 0; k < terms; ++k) {
          const long src = j + s + 2 * s * k;
          if (src >= ny) break;
          sum += f[base + src];
        }
        out.h[base + j] = -kTwoI * sum;
      }
    }
    for (long j = 0; j < ny; ++j) {
      const Complex up = j + s < ny ? out.h[base + j + s] : Complex(0.0);
      const Complex down = j - s >= 0 ? out.h[base + j - s] : Complex(0.0);
      out.g[base + j] = f[base + j] - (up - down) / kTwoI;
    }
  });

  out.g_violations = support_violations(out.g, out.g.support, options.support_zero,
                                        &first_bad, options.tol.lp);
  if (out.g_violations > 0)
    throw Error(ErrorKind::SupportViolation,
                "g leaves the cylinder: " + describe_cell(grid, first_bad));
  out.h_violations = support_violations(out.h, out.h.support, options.support_zero,
                                        &first_bad, options.tol.lp);
  if (out.h_violations > 0)
    throw Error(ErrorKind::SupportViolation,
                "h leaves the peeled zonotope: " + describe_cell(grid, first_bad));
  return out;
}

GridFunction recompose(const GridFunction& g, const GridFunction& h) {
  check_alignment(g.grid, h.grid);
  const long s = half_shift(g.grid);
  const long ny = g.grid.n.back();
  GridFunction f(g.grid);
  for (long c = 0; c < g.grid.columns(); ++c) {
    const long base = c * ny;
    for (long j = 0; j < ny; ++j) {
      const Complex up = j + s < ny ? h[base + j + s] : Complex(0.0);
      const Complex down = j - s >= 0 ? h[base + j - s] : Complex(0.0);
      f[base + j] = g[base + j] + (up - down) / kTwoI;
    }
  }
  return f;
}

Complex grid_transform(const GridFunction& f, const Vector& xi) {
  const GridSpec& grid = f.grid;
  const int d = grid.dim();
  if (xi.size() != d)
    throw Error(ErrorKind::DimensionMismatch, "frequency dimension differs from grid");
  const double two_pi = 2.0 * std::numbers::pi;
  const long ny = grid.n.back();
  std::vector<Complex> ey(static_cast<std::size_t>(ny));
  for (long j = 0; j < ny; ++j) {
    const double y = grid.lo(d - 1) + (static_cast<double>(j) + 0.5) * grid.step(d - 1);
    const double ph = -two_pi * xi(d - 1) * y;
    ey[static_cast<std::size_t>(j)] = Complex(std::cos(ph), std::sin(ph));
  }
  Complex total = 0.0;
  for (long c = 0; c < grid.columns(); ++c) {
    const long base = c * ny;
    Complex col = 0.0;
    for (long j = 0; j < ny; ++j) col += f[base + j] * ey[static_cast<std::size_t>(j)];
    if (col == Complex(0.0)) continue;
    const double ph = d > 1 ? -two_pi * xi.head(d - 1).dot(grid.column_point(c)) : 0.0;
    total += col * Complex(std::cos(ph), std::sin(ph));
  }
  return total * grid.cell_volume();
}

FrequencySideResult freq_side_check(const GridFunction& f, const GridFunction& g,
                                    const GridFunction& h,
                                    const std::vector<Vector>& samples) {
  check_alignment(f.grid, g.grid);
  check_alignment(f.grid, h.grid);
  const int d = f.grid.dim();
  FrequencySideResult out;
  for (const Vector& xi : samples) {
    const Complex F = grid_transform(f, xi);
    const Complex G = grid_transform(g, xi);
    const Complex H = grid_transform(h, xi);
    const double y = xi(d - 1);
    out.max_residual = std::max(out.max_residual, std::abs(F - G - H * std::sin(std::numbers::pi * y)));
    if (y == std::round(y)) {
      out.max_integer_residual = std::max(out.max_integer_residual, std::abs(F - G));
      ++out.integer_samples;
    }
  }
  return out;
}

FrequencySideResult freq_side_check(const GridFunction& g, const GridFunction& h,
                                    const std::vector<Vector>& samples) {
  return freq_side_check(recompose(g, h), g, h, samples);
}

} // namespace zonobasis
