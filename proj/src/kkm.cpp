#include "pconvex/kkm.hpp"

#include <cmath>

namespace pconvex {

SimplexGrid::SimplexGrid(int n, int resolution) : n_(n), resolution_(resolution) {
  if (n < 0) throw std::invalid_argument("simplex dimension must be >= 0");
  if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  // enumerate compositions of `resolution` into n+1 parts, lexicographic
  std::vector<int> k(static_cast<std::size_t>(n) + 1, 0);
  const double inv_r = 1.0 / static_cast<double>(resolution);
  const auto emit = [&]() {
    Vector t(n + 1);
    for (int i = 0; i <= n; ++i) t[i] = static_cast<double>(k[i]) * inv_r;
    points_.push_back(std::move(t));
  };
  const std::function<void(int, int)> rec = [&](int idx, int remaining) {
    if (idx == n) {
      k[static_cast<std::size_t>(idx)] = remaining;
      emit();
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      k[static_cast<std::size_t>(idx)] = v;
      rec(idx + 1, remaining - v);
    }
  };
  rec(0, resolution);
}

Vector phi_simplex(const PointSet& generators, const Vector& barycentric,
                   PExponent p) {
  if (generators.size() != barycentric.size())
    throw std::invalid_argument("generators/barycentric length mismatch");
  if ((barycentric.array() < 0.0).any())
    throw std::domain_error("barycentric coordinates must be non-negative");
  const Vector w = barycentric.array().pow(p.inv());
  return generators.points() * w;
}

KkmReport kkm_verify(const KkmFamily& family, const SimplexGrid& grid,
                     PExponent p) {
  const int m = family.generators.size();
  if (static_cast<int>(family.sets.size()) != m)
    throw std::invalid_argument("one predicate per generator required");
  if (grid.n() + 1 != m)
    throw std::invalid_argument("grid dimension does not match generators");

  KkmReport rep;
  rep.resolution = grid.resolution();
  rep.covering_holds = true;

  // The binding face for a grid point is its support: covering on every
  // face J reduces to "phi(t) lies in the union of the sets indexed by
  // supp(t)". Among violations, keep the one with the largest minimum
  // coordinate (the most interior), ties broken lexicographically.
  double best_min_coord = -1.0;
  for (const Vector& t : grid.points()) {
    const Vector image = phi_simplex(family.generators, t, p);
    bool covered = false;
    for (int i = 0; i < m && !covered; ++i)
      if (t[i] > 0.0 && family.sets[static_cast<std::size_t>(i)](image))
        covered = true;
    if (!covered) {
      rep.covering_holds = false;
      const double min_coord = t.minCoeff();
      if (min_coord > best_min_coord) {
        best_min_coord = min_coord;
        std::vector<int> face;
        for (int i = 0; i < m; ++i)
          if (t[i] > 0.0) face.push_back(i);
        rep.violation = KkmCoveringWitness{std::move(face), t, image};
      }
    }
  }
  if (!rep.covering_holds) return rep;

  for (const Vector& t : grid.points()) {
    const Vector image = phi_simplex(family.generators, t, p);
    bool in_all = true;
    for (int i = 0; i < m && in_all; ++i)
      in_all = family.sets[static_cast<std::size_t>(i)](image);
    if (in_all) rep.intersections.push_back({t, image});
  }
  return rep;
}

}  // namespace pconvex
