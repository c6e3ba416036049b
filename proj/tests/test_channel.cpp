#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "leakcap/channel.hpp"
#include "leakcap/models.hpp"
#include "test_support.hpp"

using namespace leakcap;
using testsupport::numbered;
using testsupport::random_channel;
using testsupport::random_deterministic_channel;
using testsupport::random_prior;

namespace {

Channel identity2() {
  Eigen::MatrixXd phi(2, 2);
  phi << 1, 0, 0, 1;
  return Channel({"a", "b"}, {"x", "y"}, phi);
}

Channel onion_channel() {
  return network_channel(four_node_onion_network());
}

Prior onion_case1_prior() {
  Eigen::VectorXd h(4);
  h << 0.1735, 0.1603, 0.3902, 0.2760;
  return Prior(h);
}

Channel table1_channel() {
  return threaded_program_channel({1.0 / 3, 1.0 / 3});
}

}  // namespace

TEST_CASE("channel construction validates stochasticity and labels") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0.6, 0.2, 0.6, 0.8;  // first column sums to 1.2
  CHECK_THROWS_WITH_AS(Channel({"a", "b"}, {"x", "y"}, bad),
                       doctest::Contains("sums to"), std::invalid_argument);

  Eigen::MatrixXd dup(2, 2);
  dup << 0.5, 0.5, 0.5, 0.5;
  CHECK_THROWS_AS(Channel({"a", "a"}, {"x", "y"}, dup), std::invalid_argument);
  CHECK_THROWS_AS(Channel({"a"}, {"x", "y"}, dup), std::invalid_argument);

  // deviations below 1e-9 are renormalized
  Eigen::MatrixXd near(2, 1);
  near << 0.5 + 2e-10, 0.5;
  const Channel ch({"a"}, {"x", "y"}, near);
  CHECK(std::abs(ch.matrix().col(0).sum() - 1.0) <= 1e-12);

  CHECK_THROWS_AS(Prior(Eigen::Vector2d(0.7, 0.7)), std::invalid_argument);
  CHECK_THROWS_AS(Prior(Eigen::Vector2d(-0.1, 1.1)), std::invalid_argument);
}

TEST_CASE("determinism flag and output support") {
  CHECK(identity2().is_deterministic());
  CHECK_FALSE(table1_channel().is_deterministic());
  const Channel onion = onion_channel();
  CHECK(onion.output_support(2) == std::vector<Eigen::Index>{3});
  CHECK(onion.output_support(0) == std::vector<Eigen::Index>{0, 1, 2});
}

TEST_CASE("output distribution matches the case-study values") {
  const Channel onion = onion_channel();
  const auto q = output_distribution(onion, onion_case1_prior());
  // observation order: (N,N), (2,R), (4,R), (N,R), (4,2)
  CHECK(q[3] == doctest::Approx(0.3902).epsilon(1e-12));  // equals h3 exactly
  CHECK(q[0] == doctest::Approx(0.1735 / 3).epsilon(1e-12));

  const auto uq = output_distribution(identity2(), Prior::uniform(2));
  CHECK(uq[0] == doctest::Approx(0.5));
  CHECK(uq[1] == doctest::Approx(0.5));

  // hand matrix-vector product against the two-thread program columns
  const Channel t1 = table1_channel();
  Eigen::VectorXd h(2);
  h << 0.4836, 0.5164;
  const auto tq = output_distribution(t1, Prior(h));
  const double expected0 = (10.0 / 27) * 0.4836 + (22.0 / 27) * 0.5164;
  CHECK(tq[0] == doctest::Approx(expected0).epsilon(1e-12));
  CHECK(tq[0] == doctest::Approx(0.6).epsilon(1e-3));
  CHECK(tq[1] == doctest::Approx(0.4).epsilon(1e-3));

  CHECK_THROWS_WITH_AS(output_distribution(t1, Prior::uniform(3)),
                       doctest::Contains("3"), std::invalid_argument);
}

TEST_CASE("entropy") {
  CHECK(entropy(Prior::uniform(4)) == doctest::Approx(2.0).epsilon(1e-12));
  Eigen::VectorXd point = Eigen::VectorXd::Zero(5);
  point(2) = 1.0;
  CHECK(entropy(Prior(point)) == 0.0);
  CHECK(entropy(onion_case1_prior()) == doctest::Approx(1.9042).epsilon(1e-3));
}

TEST_CASE("mutual information fixtures") {
  CHECK(mutual_information(identity2(), Prior::uniform(2)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // identical columns leak nothing
  Eigen::MatrixXd flat(2, 3);
  flat << 0.3, 0.3, 0.3, 0.7, 0.7, 0.7;
  const Channel noleak({"a", "b", "c"}, {"x", "y"}, flat);
  std::mt19937_64 rng(7);
  CHECK(mutual_information(noleak, random_prior(rng, 3)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // two-thread program at the case-study prior, against an independent
  // evaluation I = H(q) - sum_i h_i H(col_i)
  const Channel t1 = table1_channel();
  Eigen::VectorXd h(2);
  h << 0.4836, 0.5164;
  const Eigen::VectorXd q = t1.matrix() * h;
  double independent = entropy_nats(q);
  for (int i = 0; i < 2; ++i)
    independent -= h(i) * entropy_nats(t1.matrix().col(i));
  const double nats = mutual_information_nats(t1, Prior(h));
  CHECK(nats == doctest::Approx(independent).epsilon(1e-12));
  CHECK(nats == doctest::Approx(0.1069).epsilon(1e-2));
  CHECK(std::abs(nats - 0.1069) < 1e-3);
  CHECK(std::abs(mutual_information(t1, Prior(h)) - 0.1542) < 1e-3);
}

TEST_CASE("unit conversion") {
  CHECK(nats_to_bits(0.0) == 0.0);
  CHECK(nats_to_bits(std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(nats_to_bits(0.1069) == doctest::Approx(0.1542).epsilon(1e-3));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 10.0);
  for (int t = 0; t < 100; ++t) {
    const double x = unit(rng);
    CHECK(bits_to_nats(nats_to_bits(x)) == doctest::Approx(x).epsilon(1e-15));
  }
}

TEST_CASE("mutual information is bounded by the prior entropy") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> dim(2, 6);
  for (int t = 0; t < 1000; ++t) {
    const int n = dim(rng), m = dim(rng);
    const Channel ch = random_channel(rng, n, m);
    const Prior h = random_prior(rng, n);
    const double mi = mutual_information(ch, h);
    CHECK(mi >= 0.0);
    CHECK(mi <= entropy(h) + 1e-9);
    CHECK(mi <= std::log2(double(n)) + 1e-9);
    CHECK(mi <= std::log2(double(m)) + 1e-9);
  }
}

TEST_CASE("deterministic channels satisfy I = H(O)") {
  std::mt19937_64 rng(999);
  std::uniform_int_distribution<int> dim(2, 7);
  for (int t = 0; t < 200; ++t) {
    const int n = dim(rng), m = dim(rng);
    const Channel ch = random_deterministic_channel(rng, n, m);
    const Prior h = random_prior(rng, n);
    const auto q = output_distribution(ch, h);
    CHECK(mutual_information(ch, h) ==
          doctest::Approx(entropy_bits(q.probabilities())).epsilon(1e-10));
  }
}

TEST_CASE("mutual information is invariant under input permutation") {
  std::mt19937_64 rng(4242);
  for (int t = 0; t < 50; ++t) {
    const int n = 4, m = 5;
    const Channel ch = random_channel(rng, n, m);
    const Prior h = random_prior(rng, n);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd permuted(m, n);
    Eigen::VectorXd ph(n);
    for (int i = 0; i < n; ++i) {
      permuted.col(i) = ch.matrix().col(perm[i]);
      ph(i) = h[perm[i]];
    }
    const Channel pch(numbered("h", n), numbered("o", m), permuted);
    CHECK(mutual_information(pch, Prior(ph)) ==
          doctest::Approx(mutual_information(ch, h)).epsilon(1e-12));
  }
}
