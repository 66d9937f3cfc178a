#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pconvex/fixedpoint.hpp"
#include "pconvex/kkm.hpp"
#include "pconvex/mnc.hpp"

namespace pconvex::registry {

using json = nlohmann::json;

/// Body from a registry spec, e.g. {"key":"pball","weights":[1,1]}.
/// Known keys: pball(weights, p), euclidean_disk(radius), box(half_widths).
PBody make_body(const json& spec, int dim, PExponent p);

/// Map from a registry spec. Known keys: affine(A, b), scale(c),
/// rotation(theta_deg, c), translation(v), negation, polynomial(coeffs).
MapSpec make_map(const json& spec, int dim);

/// Sequence generator: geometric(ratio), power(exponent), constant(value),
/// mobius.
SeqGen make_seqgen(const json& spec);

/// KKM predicate: coord_ge(index, threshold), ball(center, radius),
/// halfspace(normal, offset), plus the combinators all_of, any_of,
/// complement. Closed sets get a 1e-12 boundary band.
SetPredicate make_predicate(const json& spec);

struct BuiltinInfo {
  std::string category;
  std::string key;
  std::string signature;
};

/// Stable-sorted registry listing, optionally filtered by substring.
std::vector<BuiltinInfo> list_builtins(const std::string& filter = "");

/// The fixed benchmark suite (dimension-2 maps with asserted classes) that
/// the acceptance and property tests sweep.
std::vector<MapSpec> benchmark_suite();

}  // namespace pconvex::registry
