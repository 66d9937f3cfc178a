#include "pconvex/registry.hpp"

#include <algorithm>
#include <cmath>

namespace pconvex::registry {

namespace {

Vector vector_from(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = j.at(i).get<double>();
  return v;
}

Matrix matrix_from(const json& j) {
  const auto rows = j.size();
  if (rows == 0) throw std::invalid_argument("matrix must be non-empty");
  const auto cols = j.at(0).size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols)
      throw std::invalid_argument("matrix rows have mixed lengths");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          j.at(r).at(c).get<double>();
  }
  return m;
}

std::string key_of(const json& spec, const char* field) {
  if (!spec.contains("key"))
    throw std::invalid_argument(std::string(field) + ".key: missing");
  return spec.at("key").get<std::string>();
}

}  // namespace

PBody make_body(const json& spec, int dim, PExponent p) {
  const std::string key = key_of(spec, "body");
  BodyOptions opts;
  opts.circled = true;  // every built-in body is symmetric

  if (key == "pball") {
    Vector w = Vector::Ones(dim);
    if (spec.contains("weights")) {
      w = vector_from(spec.at("weights"));
      if (w.size() != dim)
        throw std::invalid_argument("body.weights: length must equal dim");
      if ((w.array() <= 0.0).any())
        throw std::invalid_argument("body.weights: must be positive");
    }
    const double pe = p.value();
    auto gauge = [w, pe](const Vector& x) {
      return (w.array() * x.array().abs().pow(pe)).sum();
    };
    auto member = [gauge](const Vector& x) { return gauge(x) <= 1.0; };
    double radius = 0.0;
    for (int i = 0; i < dim; ++i)
      radius += std::pow(1.0 / w[i], 2.0 * p.inv());
    radius = std::sqrt(radius);
    PBody body(member, p, radius, dim, opts);
    body.with_closed_form(gauge);
    return body;
  }

  if (key == "euclidean_disk") {
    const double r = spec.value("radius", 1.0);
    if (!(r > 0.0))
      throw std::invalid_argument("body.radius: must be positive");
    const double pe = p.value();
    auto gauge = [r, pe](const Vector& x) {
      return std::pow(x.norm() / r, pe);
    };
    auto member = [r](const Vector& x) { return x.norm() <= r; };
    PBody body(member, p, r, dim, opts);
    body.with_closed_form(gauge);
    return body;
  }

  if (key == "box") {
    Vector h = Vector::Ones(dim);
    if (spec.contains("half_widths")) {
      h = vector_from(spec.at("half_widths"));
      if (h.size() != dim)
        throw std::invalid_argument("body.half_widths: length must equal dim");
      if ((h.array() <= 0.0).any())
        throw std::invalid_argument("body.half_widths: must be positive");
    }
    const double pe = p.value();
    auto gauge = [h, pe](const Vector& x) {
      return std::pow((x.array().abs() / h.array()).maxCoeff(), pe);
    };
    auto member = [h](const Vector& x) {
      return ((x.array().abs() - h.array()) <= 0.0).all();
    };
    PBody body(member, p, h.norm(), dim, opts);
    body.with_closed_form(gauge);
    return body;
  }

  throw std::invalid_argument("body.key: unknown registry key '" + key + "'");
}

MapSpec make_map(const json& spec, int dim) {
  const std::string key = key_of(spec, "map");
  MapSpec map;
  map.name = key;
  if (spec.contains("asserted_class"))
    map.asserted_class =
        mapping_class_from_string(spec.at("asserted_class").get<std::string>());

  if (key == "affine") {
    const Matrix A = matrix_from(spec.at("A"));
    const Vector b = vector_from(spec.at("b"));
    if (A.rows() != dim || A.cols() != dim || b.size() != dim)
      throw std::invalid_argument("map.A/map.b: shape must match dim");
    map.F = [A, b](const Vector& x) { return Vector(A * x + b); };
    return map;
  }
  if (key == "scale") {
    const double c = spec.value("c", 0.5);
    map.F = [c](const Vector& x) { return Vector(c * x); };
    map.known_fixed_point = Vector::Zero(dim);
    return map;
  }
  if (key == "rotation") {
    if (dim < 2)
      throw std::invalid_argument("map.rotation: needs dim >= 2");
    const double theta =
        spec.value("theta_deg", 30.0) * 3.14159265358979323846 / 180.0;
    const double c = spec.value("c", 1.0);
    const double cs = std::cos(theta), sn = std::sin(theta);
    map.F = [cs, sn, c](const Vector& x) {
      Vector y = x;
      y[0] = cs * x[0] - sn * x[1];
      y[1] = sn * x[0] + cs * x[1];
      return Vector(c * y);
    };
    map.known_fixed_point = Vector::Zero(dim);
    return map;
  }
  if (key == "translation") {
    const Vector v = vector_from(spec.at("v"));
    if (v.size() != dim)
      throw std::invalid_argument("map.v: length must equal dim");
    map.F = [v](const Vector& x) { return Vector(x + v); };
    return map;
  }
  if (key == "negation") {
    map.F = [](const Vector& x) { return Vector(-x); };
    map.known_fixed_point = Vector::Zero(dim);
    return map;
  }
  if (key == "polynomial") {
    if (!spec.contains("coeffs"))
      throw std::invalid_argument("map.coeffs: missing");
    const Vector coeffs = vector_from(spec.at("coeffs"));
    map.F = [coeffs](const Vector& x) {
      Vector y(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        double acc = 0.0;  // Horner, coeffs[k] multiplies x^k
        for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k)
          acc = acc * x[i] + coeffs[k];
        y[i] = acc;
      }
      return y;
    };
    return map;
  }

  throw std::invalid_argument("map.key: unknown registry key '" + key + "'");
}

SeqGen make_seqgen(const json& spec) {
  const std::string key = key_of(spec, "sequence");
  if (key == "geometric") return SeqGen::geometric(spec.value("ratio", 0.5));
  if (key == "power") return SeqGen::power(spec.value("exponent", 2.0));
  if (key == "constant") return SeqGen::constant(spec.value("value", 1.0));
  if (key == "mobius") return SeqGen::mobius();
  throw std::invalid_argument("sequence.key: unknown registry key '" + key +
                              "'");
}

SetPredicate make_predicate(const json& spec) {
  const std::string key = key_of(spec, "predicate");
  constexpr double kBand = 1e-12;  // closed-set boundary tolerance

  if (key == "coord_ge") {
    const int index = spec.value("index", 0);
    const double threshold = spec.value("threshold", 0.0);
    return [index, threshold](const Vector& x) {
      if (index < 0 || index >= x.size()) return false;
      return x[index] >= threshold - kBand;
    };
  }
  if (key == "ball") {
    const Vector center = vector_from(spec.at("center"));
    const double radius = spec.value("radius", 1.0);
    return [center, radius](const Vector& x) {
      return (x - center).norm() <= radius + kBand;
    };
  }
  if (key == "halfspace") {
    const Vector normal = vector_from(spec.at("normal"));
    const double offset = spec.value("offset", 0.0);
    return [normal, offset](const Vector& x) {
      return normal.dot(x) <= offset + kBand;
    };
  }
  if (key == "all_of" || key == "any_of") {
    std::vector<SetPredicate> parts;
    for (const auto& sub : spec.at("preds"))
      parts.push_back(make_predicate(sub));
    const bool conjunction = key == "all_of";
    return [parts, conjunction](const Vector& x) {
      for (const auto& pr : parts)
        if (pr(x) != conjunction) return !conjunction;
      return conjunction;
    };
  }
  if (key == "complement") {
    SetPredicate inner = make_predicate(spec.at("pred"));
    return [inner](const Vector& x) { return !inner(x); };
  }
  throw std::invalid_argument("predicate.key: unknown registry key '" + key +
                              "'");
}

std::vector<BuiltinInfo> list_builtins(const std::string& filter) {
  static const std::vector<BuiltinInfo> all = {
      {"bodies", "box", "box(half_widths)"},
      {"bodies", "euclidean_disk", "euclidean_disk(radius)"},
      {"bodies", "pball", "pball(weights, p)"},
      {"conditions", "altman", "altman"},
      {"conditions", "inequality", "inequality(1..7)"},
      {"conditions", "leray_schauder", "leray_schauder"},
      {"conditions", "parametric", "parametric(1..4, alpha, beta)"},
      {"conditions", "petryshyn", "petryshyn"},
      {"conditions", "rothe", "rothe"},
      {"maps", "affine", "affine(A, b)"},
      {"maps", "negation", "negation"},
      {"maps", "polynomial", "polynomial(coeffs)"},
      {"maps", "rotation", "rotation(theta_deg, c)"},
      {"maps", "scale", "scale(c)"},
      {"maps", "translation", "translation(v)"},
      {"predicates", "all_of", "all_of(preds)"},
      {"predicates", "any_of", "any_of(preds)"},
      {"predicates", "ball", "ball(center, radius)"},
      {"predicates", "complement", "complement(pred)"},
      {"predicates", "coord_ge", "coord_ge(index, threshold)"},
      {"predicates", "halfspace", "halfspace(normal, offset)"},
      {"sequences", "constant", "constant(value)"},
      {"sequences", "geometric", "geometric(ratio)"},
      {"sequences", "mobius", "mobius(i/(i+1))"},
      {"sequences", "power", "power(exponent)"},
  };
  if (filter.empty()) return all;
  std::vector<BuiltinInfo> out;
  for (const auto& b : all)
    if (b.key.find(filter) != std::string::npos) out.push_back(b);
  return out;
}

std::vector<MapSpec> benchmark_suite() {
  std::vector<MapSpec> maps;
  const auto push = [&](json spec) { maps.push_back(make_map(spec, 2)); };
  push({{"key", "scale"}, {"c", 0.5}, {"asserted_class", "condensing"}});
  push({{"key", "scale"}, {"c", 2.0}, {"asserted_class", "condensing"}});
  push({{"key", "negation"}, {"asserted_class", "nonexpansive"}});
  push({{"key", "rotation"},
        {"theta_deg", 30.0},
        {"c", 1.0},
        {"asserted_class", "nonexpansive"}});
  push({{"key", "rotation"},
        {"theta_deg", 15.0},
        {"c", 0.9},
        {"asserted_class", "condensing"}});
  push({{"key", "translation"},
        {"v", {0.2, 0.0}},
        {"asserted_class", "one_set_contractive"}});
  push({{"key", "affine"},
        {"A", {{0.3, 0.1}, {-0.1, 0.2}}},
        {"b", {0.1, -0.05}},
        {"asserted_class", "condensing"}});
  push({{"key", "polynomial"},
        {"coeffs", {0.0, 0.25, 0.0, 0.25}},
        {"asserted_class", "semiclosed_one_set_contractive"}});
  return maps;
}

}  // namespace pconvex::registry
