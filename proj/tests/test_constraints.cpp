#include <doctest.h>

#include <random>

#include "leakcap/constraints.hpp"
#include "test_support.hpp"

using namespace leakcap;
using testsupport::random_prior;

namespace {

LinearConstraint make(std::initializer_list<double> coeffs, Relation rel,
                      double bound, std::string name = "c") {
  Eigen::VectorXd f(static_cast<Eigen::Index>(coeffs.size()));
  Eigen::Index i = 0;
  for (double v : coeffs) f(i++) = v;
  return LinearConstraint(f, rel, bound, std::move(name));
}

bool holds(const LinearConstraint& c, const Eigen::VectorXd& h) {
  const double g = c.coeffs.dot(h);
  switch (c.relation) {
    case Relation::Equal: return std::abs(g - c.bound) <= 1e-12;
    case Relation::GreaterEqual: return g >= c.bound - 1e-12;
    case Relation::StrictlyGreater: return g > c.bound;
    case Relation::LessEqual: return g <= c.bound + 1e-12;
    case Relation::StrictlyLess: return g < c.bound;
  }
  return false;
}

}  // namespace

TEST_CASE("evaluate") {
  Eigen::VectorXd h1(4);
  h1 << 0.1735, 0.1603, 0.3902, 0.2760;
  CHECK(evaluate(make({1, -1, 0, 0}, Relation::GreaterEqual, 0), Prior(h1)) ==
        doctest::Approx(0.0132).epsilon(1e-12));

  std::mt19937_64 rng(5);
  const Prior any = random_prior(rng, 4);
  CHECK(evaluate(make({1, 1, 1, 1}, Relation::Equal, 1), any) ==
        doctest::Approx(1.0).epsilon(1e-12));

  Eigen::VectorXd h2(4);
  h2 << 0.2868, 0.0029, 0.3979, 0.3125;
  h2 /= h2.sum();  // published values carry rounding; renormalize
  const double g = evaluate(make({1, -100, 0, 0}, Relation::StrictlyGreater, 0),
                            Prior(h2));
  CHECK(g == doctest::Approx(-0.0032).epsilon(1e-3));

  CHECK_THROWS_AS(
      evaluate(make({1, -1}, Relation::GreaterEqual, 0), Prior::uniform(4)),
      std::invalid_argument);
  CHECK_THROWS_AS(make({0, 0}, Relation::Equal, 1), std::invalid_argument);
}

TEST_CASE("normalize rewrites relations and rescales") {
  // h_odd <= h_even, i.e. h0 - h1 <= 0
  const auto flipped = normalize(make({1, -1}, Relation::LessEqual, 0));
  CHECK(flipped.relation == Relation::GreaterEqual);
  CHECK(flipped.coeffs(0) == doctest::Approx(-1.0));
  CHECK(flipped.coeffs(1) == doctest::Approx(1.0));
  CHECK(flipped.bound == 0.0);

  const auto scaled =
      normalize(make({1, -100, 0, 0}, Relation::StrictlyGreater, 0));
  CHECK(scaled.relation == Relation::StrictlyGreater);
  CHECK(scaled.coeffs(0) == doctest::Approx(0.01));
  CHECK(scaled.coeffs(1) == doctest::Approx(-1.0));
  CHECK(scaled.bound == 0.0);

  const auto already = make({-0.5, 1}, Relation::GreaterEqual, 0.25);
  const auto once = normalize(already);
  const auto twice = normalize(once);
  CHECK((once.coeffs.array() == twice.coeffs.array()).all());
  CHECK(once.bound == twice.bound);
  CHECK(once.relation == twice.relation);
}

TEST_CASE("normalize preserves the truth value of the relation") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_int_distribution<int> rel(0, 4);
  for (int t = 0; t < 500; ++t) {
    Eigen::VectorXd f(3);
    do {
      for (int i = 0; i < 3; ++i) f(i) = coeff(rng);
    } while (f.cwiseAbs().maxCoeff() == 0.0);
    const LinearConstraint c(f, static_cast<Relation>(rel(rng)), coeff(rng) / 2,
                             "r");
    const LinearConstraint nc = normalize(c);
    const Eigen::VectorXd h = random_prior(rng, 3).probabilities();
    CHECK(holds(c, h) == holds(nc, h));
  }
}

TEST_CASE("feasibility report") {
  Eigen::VectorXd h1(4);
  h1 << 0.1735, 0.1603, 0.3902, 0.2760;
  ConstraintSet cs;
  cs.add(make({1, -1, 0, 0}, Relation::GreaterEqual, 0, "ge"));
  const auto rep = feasibility(cs, Prior(h1));
  REQUIRE(rep.items.size() == 1);
  CHECK(rep.items[0].satisfied);
  CHECK_FALSE(rep.items[0].active);
  CHECK(rep.all_satisfied());

  // the simplex condition written out explicitly is active everywhere
  ConstraintSet simplex;
  simplex.add(make({1, 1, 1, 1}, Relation::Equal, 1, "total"));
  std::mt19937_64 rng(8);
  const auto rep2 = feasibility(simplex, random_prior(rng, 4));
  CHECK(rep2.items[0].satisfied);
  CHECK(rep2.items[0].active);

  // strict constraint exactly on its boundary: active, flagged approximate
  Eigen::VectorXd hb(4);
  const double x = 100.0 / 101.0;
  hb << x * 0.4, 0.4 * (1 - x), 0.3, 0.3;
  hb /= hb.sum();
  ConstraintSet strict;
  strict.add(make({1, -100, 0, 0}, Relation::StrictlyGreater, 0, "gt"));
  const auto rep3 = feasibility(strict, Prior(hb), 1e-8, 0.0);
  CHECK(rep3.items[0].active);
  CHECK(rep3.items[0].approximate);
  CHECK_FALSE(rep3.items[0].satisfied);
  CHECK(rep3.all_satisfied_closure());
  CHECK_FALSE(rep3.all_satisfied());
}

TEST_CASE("active GreaterEqual constraints count as satisfied") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const Prior h = random_prior(rng, 3);
    // construct a constraint that is exactly active at h
    Eigen::VectorXd f(3);
    f << 1, 2, -1;
    ConstraintSet cs;
    cs.add(LinearConstraint(f, Relation::GreaterEqual, f.dot(h.probabilities()),
                            "tight"));
    const auto rep = feasibility(cs, h);
    CHECK(rep.items[0].active);
    CHECK(rep.items[0].satisfied);
  }
}

TEST_CASE("constraint sets canonicalize relations on insertion") {
  ConstraintSet cs;
  cs.add(make({1, -1}, Relation::StrictlyLess, 0, "lt"));
  CHECK(cs[0].relation == Relation::StrictlyGreater);
  CHECK(cs[0].coeffs(0) == -1.0);
  CHECK(cs[0].coeffs(1) == 1.0);
  CHECK(cs.equality_indices().empty());
  CHECK(cs.inequality_indices() == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(cs.add(make({1, 0, 0}, Relation::Equal, 0.5)),
                  std::invalid_argument);
}
