#include "zonobasis/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include "zonobasis/serialize.hpp"

namespace zonobasis {

long GridSpec::size() const {
  long total = 1;
  for (int k : n) total *= k;
  return total;
}

long GridSpec::columns() const {
  long total = 1;
  for (int i = 0; i + 1 < dim(); ++i) total *= n[static_cast<std::size_t>(i)];
  return total;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= step(i);
  return v;
}

Vector GridSpec::center(long index) const {
  Vector p(dim());
  for (int i = dim() - 1; i >= 0; --i) {
    const long ni = n[static_cast<std::size_t>(i)];
    p(i) = lo(i) + (static_cast<double>(index % ni) + 0.5) * step(i);
    index /= ni;
  }
  return p;
}

Vector GridSpec::column_point(long column) const {
  Vector x(dim() - 1);
  for (int i = dim() - 2; i >= 0; --i) {
    const long ni = n[static_cast<std::size_t>(i)];
    x(i) = lo(i) + (static_cast<double>(column % ni) + 0.5) * step(i);
    column /= ni;
  }
  return x;
}

GridSpec GridSpec::bounding(const Zonotope& z, int cells) {
  const Vector half = 0.5 * z.generators().cwiseAbs().rowwise().sum();
  return {z.center() - half, z.center() + half,
          std::vector<int>(static_cast<std::size_t>(z.dim()), cells)};
}

bool GridSpec::operator==(const GridSpec& o) const {
  return n == o.n && lo.size() == o.lo.size() && lo == o.lo && hi == o.hi;
}

GridFunction::GridFunction(GridSpec spec, Support supp)
    : grid(std::move(spec)), values(static_cast<std::size_t>(grid.size()), Complex(0.0)),
      support(std::move(supp)) {}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Allowed y-interval of `support` over a column; false if the column misses it.
bool support_interval(const Support& support, const Vector& x, double& lo, double& hi,
                      double tol) {
  if (const auto* z = std::get_if<Zonotope>(&support)) {
    if (z->dim() == 1) {
      const double half = 0.5 * z->generators().cwiseAbs().sum();
      lo = z->center()(0) - half - tol;
      hi = z->center()(0) + half + tol;
      return true;
    }
    Fiber f;
    if (!try_fiber(*z, x, f)) return false;
    lo = f.a - tol;
    hi = f.b + tol;
    return true;
  }
  if (const auto* c = std::get_if<CylindricSet>(&support)) {
    double phi = 0.0;
    if (!c->try_floor(x, phi)) return false;
    lo = phi - 0.5 - tol;
    hi = phi + 0.5 + tol;
    return true;
  }
  lo = -std::numeric_limits<double>::infinity();
  hi = std::numeric_limits<double>::infinity();
  return true;
}

} // namespace

long support_violations(const GridFunction& f, const Support& support, double zero,
                        long* first, double tol) {
  const GridSpec& g = f.grid;
  const int d = g.dim();
  const long ny = g.n.back();
  const double ylo = g.lo(d - 1);
  const double dy = g.step(d - 1);
  long count = 0;
  if (first) *first = -1;
  for (long c = 0; c < g.columns(); ++c) {
    double lo = 0.0, hi = 0.0;
    const bool hit = support_interval(support, g.column_point(c), lo, hi, tol);
    for (long j = 0; j < ny; ++j) {
      const long idx = c * ny + j;
      if (std::abs(f[idx]) <= zero) continue;
      const double y = ylo + (static_cast<double>(j) + 0.5) * dy;
      if (!hit || y < lo || y > hi) {
        if (first && *first < 0) *first = idx;
        ++count;
      }
    }
  }
  return count;
}

namespace {

constexpr char kMagic[8] = {'Z', 'B', 'G', 'R', 'I', 'D', '0', '1'};

void check_spec(const GridSpec& g) {
  if (g.dim() < 1 || g.lo.size() != g.dim() || g.hi.size() != g.dim())
    throw Error(ErrorKind::InvalidInput, "grid header has inconsistent dimensions");
  for (int i = 0; i < g.dim(); ++i)
    if (g.n[static_cast<std::size_t>(i)] < 1 || !(g.hi(i) > g.lo(i)))
      throw Error(ErrorKind::InvalidInput, "grid axis must have positive size");
}

bool has_json_extension(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

} // namespace

void write_grid_function(const GridFunction& f, const std::string& path) {
  if (has_json_extension(path)) {
    nlohmann::json j;
    j["format"] = "zonobasis-grid";
    j["dim"] = f.grid.dim();
    j["lo"] = to_json(f.grid.lo);
    j["hi"] = to_json(f.grid.hi);
    j["n"] = f.grid.n;
    nlohmann::json values = nlohmann::json::array();
    for (const auto& v : f.values) values.push_back({v.real(), v.imag()});
    j["values"] = std::move(values);
    write_text(path, j.dump() + "\n");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  const auto d = static_cast<std::uint32_t>(f.grid.dim());
  out.write(reinterpret_cast<const char*>(&d), sizeof(d));
  out.write(reinterpret_cast<const char*>(f.grid.lo.data()),
            static_cast<std::streamsize>(sizeof(double) * d));
  out.write(reinterpret_cast<const char*>(f.grid.hi.data()),
            static_cast<std::streamsize>(sizeof(double) * d));
  for (int k : f.grid.n) {
    const auto v = static_cast<std::uint32_t>(k);
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
  }
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(sizeof(Complex) * f.values.size()));
}

GridFunction read_grid_function(const std::string& path) {
  if (has_json_extension(path)) {
    const nlohmann::json j = parse_json_file(path);
    try {
      GridSpec spec;
      spec.lo = vector_from_json(j.at("lo"));
      spec.hi = vector_from_json(j.at("hi"));
      spec.n = j.at("n").get<std::vector<int>>();
      if (j.contains("dim") && j.at("dim").get<int>() != spec.dim())
        throw Error(ErrorKind::InvalidInput, "grid 'dim' disagrees with 'n'");
      check_spec(spec);
      GridFunction f(spec);
      const auto& values = j.at("values");
      if (static_cast<long>(values.size()) != spec.size())
        throw Error(ErrorKind::InvalidInput, "grid value count does not match header");
      for (std::size_t i = 0; i < values.size(); ++i)
        f.values[i] = Complex(values[i].at(0).get<double>(), values[i].at(1).get<double>());
      return f;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
    }
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  char magic[8];
  std::uint32_t d = 0;
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0 ||
      !in.read(reinterpret_cast<char*>(&d), sizeof(d)) || d == 0 || d > 16)
    throw Error(ErrorKind::InvalidInput, path + ": not a zonobasis grid file");
  GridSpec spec;
  spec.lo.resize(d);
  spec.hi.resize(d);
  spec.n.resize(d);
  in.read(reinterpret_cast<char*>(spec.lo.data()), static_cast<std::streamsize>(sizeof(double) * d));
  in.read(reinterpret_cast<char*>(spec.hi.data()), static_cast<std::streamsize>(sizeof(double) * d));
  for (auto& k : spec.n) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    k = static_cast<int>(v);
  }
  if (!in) throw Error(ErrorKind::InvalidInput, path + ": truncated grid header");
  check_spec(spec);
  GridFunction f(spec);
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(sizeof(Complex) * f.values.size()));
  if (!in) throw Error(ErrorKind::InvalidInput, path + ": truncated grid values");
  return f;
}

} // namespace zonobasis
