#include "leakcap/constraints.hpp"

#include <cmath>
#include <stdexcept>

namespace leakcap {

std::string to_string(Relation r) {
  switch (r) {
    case Relation::Equal: return "=";
    case Relation::GreaterEqual: return ">=";
    case Relation::StrictlyGreater: return ">";
    case Relation::LessEqual: return "<=";
    case Relation::StrictlyLess: return "<";
  }
  return "?";
}

LinearConstraint::LinearConstraint(Eigen::VectorXd coefficients, Relation rel,
                                   double bnd, std::string label)
    : coeffs(std::move(coefficients)), bound(bnd), relation(rel),
      name(std::move(label)) {
  if (coeffs.size() == 0 || coeffs.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("constraint '" + name +
                                "' has no nonzero coefficient");
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    if (!std::isfinite(coeffs(i)))
      throw std::invalid_argument("constraint '" + name +
                                  "' has a non-finite coefficient");
  if (!std::isfinite(bound))
    throw std::invalid_argument("constraint '" + name +
                                "' has a non-finite bound");
}

double evaluate(const LinearConstraint& c, const Eigen::VectorXd& h) {
  if (h.size() != c.coeffs.size())
    throw std::invalid_argument("constraint '" + c.name + "' has " +
                                std::to_string(c.coeffs.size()) +
                                " coefficients but the prior has " +
                                std::to_string(h.size()) + " entries");
  return c.coeffs.dot(h);
}

double evaluate(const LinearConstraint& c, const Prior& h) {
  return evaluate(c, h.probabilities());
}

namespace {

// <= and < become >= and > by negating both sides.
LinearConstraint canonical_relation(LinearConstraint c) {
  if (c.relation == Relation::LessEqual || c.relation == Relation::StrictlyLess) {
    c.coeffs = -c.coeffs;
    c.bound = -c.bound;
    c.relation = c.relation == Relation::LessEqual ? Relation::GreaterEqual
                                                   : Relation::StrictlyGreater;
  }
  return c;
}

}  // namespace

LinearConstraint normalize(const LinearConstraint& c) {
  LinearConstraint out = canonical_relation(c);
  const double scale = out.coeffs.cwiseAbs().maxCoeff();
  out.coeffs /= scale;
  out.bound /= scale;
  return out;
}

ConstraintSet::ConstraintSet(std::vector<LinearConstraint> cs) {
  for (auto& c : cs) add(std::move(c));
}

void ConstraintSet::add(LinearConstraint c) {
  if (!constraints_.empty() && c.coeffs.size() != dimension())
    throw std::invalid_argument(
        "constraint '" + c.name + "' has " + std::to_string(c.coeffs.size()) +
        " coefficients but the set is over " + std::to_string(dimension()) +
        " secrets");
  constraints_.push_back(canonical_relation(std::move(c)));
}

Eigen::Index ConstraintSet::dimension() const {
  return constraints_.empty() ? 0 : constraints_.front().coeffs.size();
}

std::vector<std::size_t> ConstraintSet::equality_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < constraints_.size(); ++k)
    if (constraints_[k].relation == Relation::Equal) out.push_back(k);
  return out;
}

std::vector<std::size_t> ConstraintSet::inequality_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < constraints_.size(); ++k)
    if (constraints_[k].relation != Relation::Equal) out.push_back(k);
  return out;
}

bool FeasibilityReport::all_satisfied() const {
  for (const auto& s : items)
    if (!s.satisfied) return false;
  return true;
}

bool FeasibilityReport::all_satisfied_closure() const {
  for (const auto& s : items)
    if (!s.satisfied && !s.approximate) return false;
  return true;
}

FeasibilityReport feasibility(const ConstraintSet& cs, const Prior& h,
                              double tol, double strict_margin) {
  FeasibilityReport report;
  report.items.reserve(cs.size());
  for (const auto& c : cs.constraints()) {
    ConstraintStatus st;
    st.value = evaluate(c, h);
    const double scale = c.coeffs.cwiseAbs().maxCoeff();
    const double slack = (st.value - c.bound) / scale;  // normalized
    st.active = std::abs(slack) <= tol;
    switch (c.relation) {
      case Relation::Equal:
        st.satisfied = st.active;
        break;
      case Relation::GreaterEqual:
        st.satisfied = slack >= -tol;
        break;
      case Relation::StrictlyGreater:
        st.satisfied = st.value > c.bound + strict_margin && !st.active;
        st.approximate = st.active;  // sits on the open boundary
        break;
      default:
        break;  // stored constraints are canonical
    }
    report.items.push_back(st);
  }
  return report;
}

}  // namespace leakcap
