#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "leakcap/channel.hpp"

namespace leakcap {

enum class Relation { Equal, GreaterEqual, StrictlyGreater, LessEqual, StrictlyLess };

std::string to_string(Relation r);

/// One linear side condition on the prior: g(h) = sum_i coeffs(i) * h(i)
/// compared against bound under the stated relation. The simplex condition
/// (sum h = 1) is never expressed this way; the solver injects it itself.
struct LinearConstraint {
  Eigen::VectorXd coeffs;
  double bound = 0.0;
  Relation relation = Relation::GreaterEqual;
  std::string name;

  LinearConstraint(Eigen::VectorXd coefficients, Relation rel, double bnd,
                   std::string label = "");
};

double evaluate(const LinearConstraint& c, const Eigen::VectorXd& h);
double evaluate(const LinearConstraint& c, const Prior& h);

/// Canonical form: <= and < are rewritten to >= and > by negation, then
/// coefficients and bound are rescaled so that max |coeff| = 1. Idempotent.
LinearConstraint normalize(const LinearConstraint& c);

/// Ordered collection of side conditions. Relations are canonicalized on
/// insertion (sign flip only, no rescaling), so stored constraints always use
/// Equal / GreaterEqual / StrictlyGreater; multipliers reported by the solver
/// refer to the constraints exactly as stored here.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(std::vector<LinearConstraint> cs);

  void add(LinearConstraint c);

  std::size_t size() const { return constraints_.size(); }
  bool empty() const { return constraints_.empty(); }
  const LinearConstraint& operator[](std::size_t k) const { return constraints_[k]; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }

  /// Number of secrets the constraints are expressed over (0 when empty).
  Eigen::Index dimension() const;

  std::vector<std::size_t> equality_indices() const;
  std::vector<std::size_t> inequality_indices() const;

 private:
  std::vector<LinearConstraint> constraints_;
};

struct ConstraintStatus {
  double value = 0.0;       // g_k(h)
  bool satisfied = false;   // the stated relation holds (strictly, for > / <)
  bool active = false;      // g_k(h) ~ bound within the activity tolerance
  bool approximate = false; // a strict relation sits on its boundary
};

struct FeasibilityReport {
  std::vector<ConstraintStatus> items;

  bool all_satisfied() const;
  /// Strict relations weakened to their closures.
  bool all_satisfied_closure() const;
};

/// Activity is decided on the normalized scale (max |coeff| = 1) so the
/// tolerance is comparable across constraints; reported values are raw.
/// A strict inequality counts as satisfied only when it clears the bound by
/// more than strict_margin.
FeasibilityReport feasibility(const ConstraintSet& cs, const Prior& h,
                              double tol = 1e-8, double strict_margin = 0.0);

}  // namespace leakcap
