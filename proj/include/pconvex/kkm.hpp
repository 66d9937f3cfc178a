#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pconvex/pcore.hpp"

namespace pconvex {

/// Barycentric grid on the n-simplex: tuples k/R with sum k_i = R.
class SimplexGrid {
 public:
  SimplexGrid(int n, int resolution);

  int n() const noexcept { return n_; }
  int resolution() const noexcept { return resolution_; }
  const std::vector<Vector>& points() const noexcept { return points_; }

 private:
  int n_;
  int resolution_;
  std::vector<Vector> points_;
};

using SetPredicate = std::function<bool(const Vector&)>;

/// Generators x_0..x_n plus one closed-set predicate per generator, the
/// predicates acting on the image space.
struct KkmFamily {
  PointSet generators;
  std::vector<SetPredicate> sets;
};

/// Simplex-to-space map t -> sum t_i^(1/p) x_i. The weights t_i^(1/p) form a
/// p-convex combination, so images of generator tuples inside a p-convex
/// body stay in the body.
Vector phi_simplex(const PointSet& generators, const Vector& barycentric,
                   PExponent p);

struct KkmCoveringWitness {
  std::vector<int> face;  // support of the violating grid point
  Vector barycentric;
  Vector image;
};

struct KkmIntersectionWitness {
  Vector barycentric;
  Vector image;
};

struct KkmReport {
  bool covering_holds = false;
  std::optional<KkmCoveringWitness> violation;
  std::vector<KkmIntersectionWitness> intersections;
  int resolution = 0;
};

/// Brute-force covering check over every face of the grid: each grid point
/// supported on J must land in the union of the sets indexed by J. When the
/// covering holds the grid is searched for points in the total intersection.
/// Witnesses are canonical: among violations the one with the largest
/// minimum coordinate is reported (ties broken lexicographically).
/// An empty intersection list means "not realized at this resolution", not a
/// refutation.
KkmReport kkm_verify(const KkmFamily& family, const SimplexGrid& grid,
                     PExponent p);

}  // namespace pconvex
