#include "leakcap/models.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace leakcap {

Channel threaded_program_channel(const ThreadedProgramParams& params) {
  const double p = params.reveal_first;
  const double q = params.zero_first;
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("thread schedule probabilities must lie in [0,1]");
  const double odd_zero = p * (1 - q) + (1 - p) * (1 - q) * p;
  const double even_zero = 1 - p * q - (1 - p) * p * q;
  Eigen::MatrixXd rows(2, 2);
  rows << odd_zero, 1 - odd_zero,
          even_zero, 1 - even_zero;
  return Channel::from_rows({"h_odd", "h_even"}, {"O0", "O1"}, rows);
}

NetworkModel::NetworkModel(std::vector<std::string> nodes,
                           std::vector<std::pair<std::string, std::string>> edges,
                           std::vector<std::string> senders,
                           std::string adversary, std::string receiver,
                           bool directed)
    : nodes_(std::move(nodes)), directed_(directed) {
  if (nodes_.empty()) throw std::invalid_argument("network has no nodes");
  std::map<std::string, int> index;
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    if (!index.emplace(nodes_[v], static_cast<int>(v)).second)
      throw std::invalid_argument("duplicate node '" + nodes_[v] + "'");
  }
  auto lookup = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end())
      throw std::invalid_argument("unknown node '" + name + "'");
    return it->second;
  };

  adjacency_.resize(nodes_.size());
  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : edges) {
    const int u = lookup(a), v = lookup(b);
    if (u == v) throw std::invalid_argument("self-loop on node '" + a + "'");
    if (seen.insert({u, v}).second) adjacency_[u].push_back(v);
    if (!directed_ && seen.insert({v, u}).second) adjacency_[v].push_back(u);
  }
  for (auto& succ : adjacency_) std::sort(succ.begin(), succ.end());

  adversary_ = lookup(adversary);
  receiver_ = lookup(receiver);
  if (adversary_ == receiver_)
    throw std::invalid_argument("the adversary cannot be the receiver");
  for (const auto& s : senders) {
    const int v = lookup(s);
    if (v == receiver_)
      throw std::invalid_argument("the receiver cannot be a sender");
    senders_.push_back(v);
  }
  if (senders_.empty()) throw std::invalid_argument("network has no senders");

  // Every sender must be able to reach the receiver at all.
  std::vector<bool> reaches(nodes_.size(), false);
  std::queue<int> frontier;
  // reverse reachability from the receiver
  std::vector<std::vector<int>> pred(nodes_.size());
  for (std::size_t u = 0; u < adjacency_.size(); ++u)
    for (int v : adjacency_[u]) pred[v].push_back(static_cast<int>(u));
  reaches[receiver_] = true;
  frontier.push(receiver_);
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int u : pred[v]) {
      if (!reaches[u]) {
        reaches[u] = true;
        frontier.push(u);
      }
    }
  }
  for (int s : senders_)
    if (!reaches[s])
      throw std::invalid_argument("sender '" + nodes_[s] +
                                  "' cannot reach the receiver");
}

int NetworkModel::index_of(const std::string& node) const {
  for (std::size_t v = 0; v < nodes_.size(); ++v)
    if (nodes_[v] == node) return static_cast<int>(v);
  throw std::invalid_argument("unknown node '" + node + "'");
}

std::string observe(const NetworkModel& net, const std::vector<int>& path) {
  const auto pos = std::find(path.begin(), path.end(), net.adversary());
  if (pos == path.end()) return "(N,N)";
  if (pos == path.begin()) return "(N,R)";
  return "(" + net.node_name(*(pos - 1)) + "," + net.node_name(*(pos + 1)) + ")";
}

std::vector<PathObservation> enumerate_paths(const NetworkModel& net, int sender,
                                             const ObservationLabeler& labeler,
                                             const PathWeight& weight) {
  if (sender < 0 || sender >= static_cast<int>(net.nodes().size()))
    throw std::invalid_argument("sender index out of range");

  std::vector<std::vector<int>> found;
  std::vector<int> path{sender};
  std::vector<bool> visited(net.nodes().size(), false);
  visited[sender] = true;

  // Depth-first over simple paths; the direct sender->receiver hop is not an
  // admissible circuit.
  std::function<void()> extend = [&]() {
    const int here = path.back();
    for (int next : net.successors(here)) {
      if (visited[next]) continue;
      if (next == net.receiver()) {
        if (path.size() >= 2) {
          auto full = path;
          full.push_back(next);
          found.push_back(std::move(full));
        }
        continue;
      }
      visited[next] = true;
      path.push_back(next);
      extend();
      path.pop_back();
      visited[next] = false;
    }
  };
  extend();

  if (found.empty())
    throw std::invalid_argument("sender '" + net.node_name(sender) +
                                "' has no admissible circuit");
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });

  std::vector<double> weights(found.size(), 1.0);
  if (weight) {
    double total = 0.0;
    for (std::size_t t = 0; t < found.size(); ++t) {
      weights[t] = weight(sender, found[t]);
      if (!(weights[t] >= 0.0))
        throw std::invalid_argument("path weight must be non-negative");
      total += weights[t];
    }
    if (total <= 0.0)
      throw std::invalid_argument("path weights for sender '" +
                                  net.node_name(sender) + "' sum to zero");
    for (auto& w : weights) w /= total;
  } else {
    for (auto& w : weights) w = 1.0 / static_cast<double>(found.size());
  }

  std::vector<PathObservation> out;
  out.reserve(found.size());
  for (std::size_t t = 0; t < found.size(); ++t) {
    PathObservation row;
    row.path = found[t];
    row.observation = labeler ? labeler(net, found[t]) : observe(net, found[t]);
    row.probability = weights[t];
    out.push_back(std::move(row));
  }
  return out;
}

PathTable path_table(const NetworkModel& net, const ObservationLabeler& labeler,
                     const PathWeight& weight) {
  PathTable table;
  table.by_sender.reserve(net.senders().size());
  for (int sender : net.senders())
    table.by_sender.push_back(enumerate_paths(net, sender, labeler, weight));
  return table;
}

Channel network_channel(const NetworkModel& net, const ObservationLabeler& labeler,
                        const PathWeight& weight) {
  const PathTable table = path_table(net, labeler, weight);

  std::vector<std::string> observations;
  for (const auto& rows : table.by_sender)
    for (const auto& row : rows)
      if (std::find(observations.begin(), observations.end(), row.observation) ==
          observations.end())
        observations.push_back(row.observation);

  Eigen::MatrixXd phi =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(observations.size()),
                            static_cast<Eigen::Index>(net.senders().size()));
  for (std::size_t i = 0; i < table.by_sender.size(); ++i) {
    for (const auto& row : table.by_sender[i]) {
      const auto j = std::find(observations.begin(), observations.end(),
                               row.observation) -
                     observations.begin();
      phi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) +=
          row.probability;
    }
  }

  std::vector<std::string> secrets;
  for (int sender : net.senders())
    secrets.push_back("h" + net.node_name(sender));
  return Channel(std::move(secrets), std::move(observations), std::move(phi));
}

NetworkModel four_node_onion_network() {
  return NetworkModel({"1", "2", "3", "4", "R"},
                      {{"1", "2"},
                       {"2", "3"},
                       {"3", "2"},
                       {"2", "4"},
                       {"4", "3"},
                       {"2", "R"},
                       {"3", "R"}},
                      {"1", "2", "3", "4"}, "3", "R",
                      /*directed=*/true);
}

}  // namespace leakcap
