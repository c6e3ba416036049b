#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "leakcap/kkt.hpp"
#include "leakcap/models.hpp"

using namespace leakcap;

namespace {

std::vector<int> nodes_of(const NetworkModel& net,
                          std::initializer_list<const char*> names) {
  std::vector<int> out;
  for (const char* n : names) out.push_back(net.index_of(n));
  return out;
}

}  // namespace

TEST_CASE("two-thread program channel") {
  SUBCASE("p = q = 1/3") {
    const Channel ch = threaded_program_channel({1.0 / 3, 1.0 / 3});
    CHECK(ch.input_labels() == std::vector<std::string>{"h_odd", "h_even"});
    CHECK(ch.matrix()(0, 0) == doctest::Approx(10.0 / 27).epsilon(1e-15));
    CHECK(ch.matrix()(0, 1) == doctest::Approx(22.0 / 27).epsilon(1e-15));
    CHECK(std::abs(ch.matrix()(0, 0) - 0.3704) < 1e-4);
    CHECK(std::abs(ch.matrix()(0, 1) - 0.8148) < 1e-4);
  }

  SUBCASE("p = 1 reveals nothing") {
    const Channel ch = threaded_program_channel({1.0, 0.4});
    CHECK((ch.matrix().col(0).array() == ch.matrix().col(1).array()).all());
    CHECK(mutual_information(ch, Prior::uniform(2)) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("p = 0, q = 0") {
    const Channel ch = threaded_program_channel({0.0, 0.0});
    CHECK(ch.matrix()(0, 0) == 0.0);  // P(O0 | h_odd)
    CHECK(ch.matrix()(0, 1) == 1.0);  // P(O0 | h_even)
  }

  CHECK_THROWS_AS(threaded_program_channel({1.2, 0.5}), std::invalid_argument);
}

TEST_CASE("path enumeration on the bundled network") {
  const NetworkModel net = four_node_onion_network();

  SUBCASE("sender 1 has three equally likely circuits") {
    const auto rows = enumerate_paths(net, net.index_of("1"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].path == nodes_of(net, {"1", "2", "R"}));
    CHECK(rows[1].path == nodes_of(net, {"1", "2", "3", "R"}));
    CHECK(rows[2].path == nodes_of(net, {"1", "2", "4", "3", "R"}));
    for (const auto& row : rows)
      CHECK(row.probability == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(rows[0].observation == "(N,N)");
    CHECK(rows[1].observation == "(2,R)");
    CHECK(rows[2].observation == "(4,R)");
  }

  SUBCASE("the eavesdropper's own circuit") {
    const auto rows = enumerate_paths(net, net.index_of("3"));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].path == nodes_of(net, {"3", "2", "R"}));
    CHECK(rows[0].probability == 1.0);
    CHECK(rows[0].observation == "(N,R)");
  }

  SUBCASE("per-sender probabilities always sum to one") {
    for (int sender : net.senders()) {
      const auto rows = enumerate_paths(net, sender);
      double total = 0.0;
      std::set<std::vector<int>> seen;
      for (const auto& row : rows) {
        total += row.probability;
        CHECK(seen.insert(row.path).second);  // simple paths, no duplicates
        std::set<int> uniq(row.path.begin(), row.path.end());
        CHECK(uniq.size() == row.path.size());
        CHECK(row.path.size() >= 3);  // never directly to the receiver
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("a three-node line has exactly one circuit") {
  const NetworkModel line({"s", "m", "R"}, {{"s", "m"}, {"m", "R"}}, {"s"}, "m",
                          "R");
  const auto rows = enumerate_paths(line, line.index_of("s"));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].path == nodes_of(line, {"s", "m", "R"}));
  CHECK(rows[0].observation == "(s,R)");
}

TEST_CASE("observation labels") {
  const NetworkModel net = four_node_onion_network();
  CHECK(observe(net, nodes_of(net, {"1", "2", "3", "R"})) == "(2,R)");
  CHECK(observe(net, nodes_of(net, {"1", "2", "R"})) == "(N,N)");
  CHECK(observe(net, nodes_of(net, {"4", "3", "2", "R"})) == "(4,2)");
  CHECK(observe(net, nodes_of(net, {"3", "2", "R"})) == "(N,R)");

  // a custom labeler is honored
  const auto channel = network_channel(
      net, [](const NetworkModel&, const std::vector<int>& path) {
        return path.size() <= 3 ? "short" : "long";
      });
  CHECK(channel.output_labels() == std::vector<std::string>{"short", "long"});
}

TEST_CASE("network compilation reproduces the case-study table exactly") {
  const Channel ch = network_channel(four_node_onion_network());
  CHECK(ch.input_labels() ==
        std::vector<std::string>{"h1", "h2", "h3", "h4"});
  CHECK(ch.output_labels() ==
        std::vector<std::string>{"(N,N)", "(2,R)", "(4,R)", "(N,R)", "(4,2)"});
  Eigen::MatrixXd expected(5, 4);
  const double third = 1.0 / 3, half = 0.5;
  expected << third, 0, 0, 0,
              third, half, 0, 0,
              third, half, 0, half,
              0, 0, 1, 0,
              0, 0, 0, half;
  CHECK((ch.matrix().array() == expected.array()).all());  // exact rationals
}

TEST_CASE("custom path weights") {
  const NetworkModel net = four_node_onion_network();
  // prefer the shortest circuit 3:1
  const auto rows = enumerate_paths(
      net, net.index_of("1"), {},
      [](int, const std::vector<int>& path) {
        return path.size() == 3 ? 3.0 : 1.0;
      });
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].probability == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(rows[1].probability == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("networks that never touch the eavesdropper leak nothing") {
  // senders a and b reach R directly or through m; the adversary x is isolated
  const NetworkModel net({"a", "b", "m", "x", "R"},
                         {{"a", "m"}, {"b", "m"}, {"m", "R"}, {"x", "m"}},
                         {"a", "b"}, "x", "R");
  const Channel ch = network_channel(net);
  CHECK(ch.num_outputs() == 1);
  CHECK(ch.output_labels() == std::vector<std::string>{"(N,N)"});
  CHECK(mutual_information(ch, Prior::uniform(2)) == 0.0);
  const auto sol = solve(ch, ConstraintSet{});
  REQUIRE(sol.solved());
  CHECK(std::abs(sol.capacity_bits) <= 1e-12);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(NetworkModel({"a", "R"}, {{"a", "R"}}, {"a", "R"}, "a", "R"),
                  std::invalid_argument);  // receiver as sender
  CHECK_THROWS_AS(NetworkModel({"a", "R"}, {{"a", "R"}}, {"a"}, "R", "R"),
                  std::invalid_argument);  // adversary = receiver
  CHECK_THROWS_AS(NetworkModel({"a", "b", "R"}, {{"b", "R"}}, {"a"}, "b", "R"),
                  std::invalid_argument);  // sender cannot reach receiver

  // connected, but the only route is the forbidden direct edge
  const NetworkModel direct({"a", "b", "R"}, {{"a", "R"}, {"b", "R"}}, {"a"},
                            "b", "R");
  CHECK_THROWS_WITH_AS(network_channel(direct),
                       doctest::Contains("no admissible circuit"),
                       std::invalid_argument);
}

TEST_CASE("random undirected relay networks compile to valid channels") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> extra(0, 1);
  int built = 0;
  for (int t = 0; t < 40; ++t) {
    // ring of 5 relays plus receiver, random chords
    std::vector<std::string> names{"n0", "n1", "n2", "n3", "n4", "R"};
    std::vector<std::pair<std::string, std::string>> edges;
    for (int v = 0; v < 5; ++v)
      edges.push_back({names[v], names[(v + 1) % 5]});
    edges.push_back({"n1", "R"});
    edges.push_back({"n3", "R"});
    if (extra(rng)) edges.push_back({"n0", "n2"});
    if (extra(rng)) edges.push_back({"n2", "R"});
    const NetworkModel net(names, edges, {"n0", "n4"}, "n2", "R");
    const Channel ch = network_channel(net);
    for (Eigen::Index i = 0; i < ch.num_inputs(); ++i)
      CHECK(std::abs(ch.matrix().col(i).sum() - 1.0) <= 1e-12);
    ++built;
  }
  CHECK(built == 40);
}
