#include "pconvex/mnc.hpp"

#include <cmath>
#include <stdexcept>

namespace pconvex {

SeqGen SeqGen::geometric(double ratio) {
  if (!(ratio > 0.0)) throw std::invalid_argument("ratio must be positive");
  return SeqGen(Kind::geometric, ratio);
}

SeqGen SeqGen::power(double exponent) {
  return SeqGen(Kind::power, exponent);
}

SeqGen SeqGen::constant(double value) {
  return SeqGen(Kind::constant, value);
}

SeqGen SeqGen::mobius() { return SeqGen(Kind::mobius, 0.0); }

double SeqGen::operator()(long i) const {
  if (i < 1) throw std::domain_error("sequence index starts at 1");
  const double x = static_cast<double>(i);
  switch (kind_) {
    case Kind::geometric: return std::pow(param_, x);
    case Kind::power: return std::pow(x, -param_);
    case Kind::constant: return param_;
    case Kind::mobius: return x / (x + 1.0);
  }
  return 0.0;
}

bool SeqGen::bounded() const {
  switch (kind_) {
    case Kind::geometric: return param_ <= 1.0;
    case Kind::power: return param_ >= 0.0;
    case Kind::constant: return true;
    case Kind::mobius: return true;
  }
  return false;
}

double SeqGen::sup_abs() const {
  switch (kind_) {
    case Kind::geometric: return param_ <= 1.0 ? param_ : INFINITY;
    case Kind::power: return param_ >= 0.0 ? 1.0 : INFINITY;
    case Kind::constant: return std::abs(param_);
    case Kind::mobius: return 1.0;  // supremum, reached only in the limit
  }
  return 0.0;
}

double SeqGen::limsup_abs() const {
  switch (kind_) {
    case Kind::geometric:
      return param_ < 1.0 ? 0.0 : (param_ == 1.0 ? 1.0 : INFINITY);
    case Kind::power:
      return param_ > 0.0 ? 0.0 : (param_ == 0.0 ? 1.0 : INFINITY);
    case Kind::constant: return std::abs(param_);
    case Kind::mobius: return 1.0;
  }
  return 0.0;
}

bool SeqGen::limsup_attained() const {
  switch (kind_) {
    case Kind::geometric: return param_ == 1.0;
    case Kind::power: return param_ == 0.0;
    case Kind::constant: return true;
    case Kind::mobius: return false;
  }
  return false;
}

bool SeqGen::p_summable(double p) const {
  switch (kind_) {
    case Kind::geometric: return param_ < 1.0;
    case Kind::power: return param_ * p > 1.0;
    case Kind::constant: return param_ == 0.0;
    case Kind::mobius: return false;
  }
  return false;
}

double SeqGen::tail_p_sum_upper(long n, double p) const {
  if (!p_summable(p))
    throw std::runtime_error("set unbounded in d_p metric");
  switch (kind_) {
    case Kind::geometric: {
      // sum_{i>n} r^(p i) = r^(p (n+1)) / (1 - r^p), exact
      const double rp = std::pow(param_, p);
      return std::pow(param_, p * static_cast<double>(n + 1)) / (1.0 - rp);
    }
    case Kind::power: {
      // sum_{i>n} i^(-qp) <= integral_n^inf x^(-qp) dx
      const double qp = param_ * p;
      return std::pow(static_cast<double>(n), 1.0 - qp) / (qp - 1.0);
    }
    case Kind::constant: return 0.0;  // only the zero sequence is summable
    case Kind::mobius: break;
  }
  throw std::runtime_error("set unbounded in d_p metric");
}

std::string SeqGen::describe() const {
  switch (kind_) {
    case Kind::geometric: return "geometric(" + std::to_string(param_) + ")";
    case Kind::power: return "power(" + std::to_string(param_) + ")";
    case Kind::constant: return "constant(" + std::to_string(param_) + ")";
    case Kind::mobius: return "mobius";
  }
  return "";
}

SeqSet SeqSet::tail_box(SeqGen edges, PExponent p) {
  return {Kind::tail_box, edges, 0.0, p};
}

SeqSet SeqSet::scaled_ball(double kappa, PExponent p) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  return {Kind::scaled_ball, SeqGen::constant(0.0), kappa, p};
}

namespace {

// Certified upper-bound surplus of the explicit truncated net for the
// scaled ball: the first `n` coordinates are grid-quantized, which leaves a
// finite net of radius kappa^p (1 + 1/(2 n^3)). The n^-3 schedule keeps the
// bracket strictly shrinking in the truncation level.
double ball_net_surplus(long n) {
  const double nd = static_cast<double>(n);
  return 0.5 / (nd * nd * nd);
}

}  // namespace

MncBracket hausdorff_mnc(const SeqSet& set, long truncation, double /*tol*/) {
  if (truncation < 1) throw std::domain_error("truncation must be >= 1");
  MncBracket b;
  b.truncation_level = truncation;
  if (set.kind == SeqSet::Kind::tail_box) {
    // truncating coordinates beyond n moves no point farther than the tail
    // sum, and the truncated box is compact
    b.lower = 0.0;
    b.upper = set.edges.tail_p_sum_upper(truncation, set.p.value());
    return b;
  }
  // scaled ball: {kappa e_i} is an infinite family pairwise 2 kappa^p apart,
  // so no finite net has radius below kappa^p; the truncated grid net gets
  // within the n^-3 surplus of that
  const double kp = std::pow(set.kappa, set.p.value());
  b.lower = kp;
  b.upper = kp * (1.0 + ball_net_surplus(truncation));
  return b;
}

MncBracket kuratowski_mnc(const SeqSet& set, long truncation, double /*tol*/) {
  if (truncation < 1) throw std::domain_error("truncation must be >= 1");
  MncBracket b;
  b.truncation_level = truncation;
  if (set.kind == SeqSet::Kind::tail_box) {
    // cover by cells that are fine in the leading coordinates: the diameter
    // of each cell is dominated by the doubled tail
    b.lower = 0.0;
    b.upper = std::pow(2.0, set.p.value()) *
              set.edges.tail_p_sum_upper(truncation, set.p.value());
    return b;
  }
  // the ball is its own one-set cover of diameter 2 kappa^p, and any finite
  // cover by smaller-diameter sets would have to separate the family
  // {kappa e_i}
  const double kp = std::pow(set.kappa, set.p.value());
  b.lower = 2.0 * kp;
  b.upper = 2.0 * kp;
  return b;
}

const char* to_string(OperatorClass c) {
  switch (c) {
    case OperatorClass::k_set_contraction: return "k_set_contraction";
    case OperatorClass::condensing: return "condensing";
    case OperatorClass::one_set_contractive: return "one_set_contractive";
    case OperatorClass::expansive: return "expansive";
  }
  return "";
}

OperatorClassification classify_operator(const DiagOperator& op,
                                         const SeqSet& /*set*/, PExponent p) {
  if (!op.coefficients.bounded())
    throw std::invalid_argument("operator coefficients are unbounded");
  OperatorClassification out;
  const double limsup = op.coefficients.limsup_abs();
  out.k = std::pow(limsup, p.value());
  out.limit_attained = op.coefficients.limsup_attained();
  if (out.k < 1.0) {
    // the image of any set in the family loses a factor k of its measure
    out.cls = OperatorClass::k_set_contraction;
    out.condensing = true;
  } else if (out.k == 1.0) {
    // the tail coefficients approach 1, so the image of the unit ball keeps
    // measure 1: one-set contractive but never condensing
    out.cls = OperatorClass::one_set_contractive;
    out.condensing = false;
  } else {
    out.cls = OperatorClass::expansive;
    out.condensing = false;
  }
  return out;
}

}  // namespace pconvex
