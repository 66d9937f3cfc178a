#pragma once

#include <optional>
#include <string>

#include "pconvex/types.hpp"

namespace pconvex {

/// Closed-form bounded-or-summable sequence generators (1-based index).
/// These are the only edge/coefficient sequences the measures accept:
/// honest noncompactness values need certified tail sums, not samples.
class SeqGen {
 public:
  enum class Kind { geometric, power, constant, mobius };

  static SeqGen geometric(double ratio);
  static SeqGen power(double exponent);
  static SeqGen constant(double value);
  static SeqGen mobius();  // i / (i + 1)

  double operator()(long i) const;  // a_i, i >= 1
  Kind kind() const noexcept { return kind_; }
  double param() const noexcept { return param_; }

  bool bounded() const;
  double sup_abs() const;
  double limsup_abs() const;
  bool limsup_attained() const;

  /// Whether sum a_i^p converges.
  bool p_summable(double p) const;
  /// Certified upper bound on sum_{i>n} a_i^p (exact for geometric).
  double tail_p_sum_upper(long n, double p) const;

  std::string describe() const;

 private:
  SeqGen(Kind k, double param) : kind_(k), param_(param) {}
  Kind kind_;
  double param_;
};

/// Analytically tractable set in the l_p sequence metric
/// d_p(x, y) = sum |x_i - y_i|^p: either the tail box {|x_i| <= a_i} or the
/// scaled unit ball kappa * {sum |x_i|^p <= 1}.
struct SeqSet {
  enum class Kind { tail_box, scaled_ball };

  static SeqSet tail_box(SeqGen edges, PExponent p);
  static SeqSet scaled_ball(double kappa, PExponent p);

  Kind kind;
  SeqGen edges;
  double kappa;
  PExponent p;
};

struct MncBracket {
  double lower = 0.0;
  double upper = 0.0;
  long truncation_level = 0;
  double gap() const { return upper - lower; }
  /// Point value, reported only once the bracket is tight enough.
  std::optional<double> scalar(double tol) const {
    if (gap() <= tol) return 0.5 * (lower + upper);
    return std::nullopt;
  }
};

/// Hausdorff measure bracket: upper bound from the truncated epsilon-net,
/// lower bound from the separated family {kappa e_i}.
MncBracket hausdorff_mnc(const SeqSet& set, long truncation, double tol);

/// Kuratowski measure bracket: diameter cover above, separated family below.
MncBracket kuratowski_mnc(const SeqSet& set, long truncation, double tol);

struct DiagOperator {
  SeqGen coefficients;
};

enum class OperatorClass {
  k_set_contraction,
  condensing,
  one_set_contractive,
  expansive
};

const char* to_string(OperatorClass c);

struct OperatorClassification {
  double k = 0.0;  // limsup_i |c_i|^p, the measure ratio on this family
  OperatorClass cls = OperatorClass::k_set_contraction;
  bool condensing = false;
  bool limit_attained = false;  // sup |c_i| reached at a finite index
};

/// Classification of the diagonal operator x_i -> c_i x_i acting on the set
/// family above, by the factor it applies to either measure.
OperatorClassification classify_operator(const DiagOperator& op,
                                         const SeqSet& set, PExponent p);

}  // namespace pconvex
