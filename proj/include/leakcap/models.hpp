#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "leakcap/channel.hpp"

namespace leakcap {

/// Two-thread program with a secret-parity assignment racing an inner thread
/// that writes the constants 0 and 1.
struct ThreadedProgramParams {
  double reveal_first = 1.0 / 3;  // chance the parity assignment runs before the inner thread
  double zero_first = 1.0 / 3;    // chance the inner thread writes 0 before 1
};

/// 2x2 channel {h_odd, h_even} -> {O0, O1}:
///   P(O0 | h_odd)  = p(1-q) + (1-p)(1-q)p
///   P(O0 | h_even) = 1 - pq - (1-p)pq
/// with p = reveal_first, q = zero_first, complements for O1.
Channel threaded_program_channel(const ThreadedProgramParams& params);

/// Relay network with one receiver and one eavesdropping node. Undirected
/// edges are expanded to arcs in both directions.
class NetworkModel {
 public:
  NetworkModel(std::vector<std::string> nodes,
               std::vector<std::pair<std::string, std::string>> edges,
               std::vector<std::string> senders, std::string adversary,
               std::string receiver, bool directed = false);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& node_name(int v) const { return nodes_[v]; }
  int index_of(const std::string& node) const;  // throws on unknown name
  const std::vector<int>& successors(int v) const { return adjacency_[v]; }
  const std::vector<int>& senders() const { return senders_; }
  int adversary() const { return adversary_; }
  int receiver() const { return receiver_; }
  bool directed() const { return directed_; }

 private:
  std::vector<std::string> nodes_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> senders_;
  int adversary_ = -1;
  int receiver_ = -1;
  bool directed_ = false;
};

/// One admissible circuit with the label the adversary records for it and its
/// probability of being chosen by the sender.
struct PathObservation {
  std::vector<int> path;  // node indices, sender first, receiver last
  std::string observation;
  double probability;
};

struct PathTable {
  std::vector<std::vector<PathObservation>> by_sender;  // parallel to senders()
};

/// What the adversary records for a circuit: "(prev,next)" when it relays the
/// message, "(N,N)" when the circuit avoids it entirely. A circuit initiated
/// by the adversary itself is recorded as "(N,R)" — nothing is delivered to
/// it and it knows the message reaches the receiver — matching the case-study
/// convention for this situation.
std::string observe(const NetworkModel& net, const std::vector<int>& path);

using ObservationLabeler =
    std::function<std::string(const NetworkModel&, const std::vector<int>&)>;
using PathWeight = std::function<double(int sender, const std::vector<int>& path)>;

/// All simple sender-to-receiver circuits with at least one relay (senders
/// never hand the message to the receiver directly), each labeled and
/// weighted. Default weighting is uniform over the sender's circuits. Paths
/// are ordered by length, then lexicographically. Throws when the sender has
/// no admissible circuit.
std::vector<PathObservation> enumerate_paths(const NetworkModel& net, int sender,
                                             const ObservationLabeler& labeler = {},
                                             const PathWeight& weight = {});

PathTable path_table(const NetworkModel& net,
                     const ObservationLabeler& labeler = {},
                     const PathWeight& weight = {});

/// Compiles the network into a channel: secrets are the senders (labeled
/// "h" + node name), observations are the distinct labels in order of first
/// appearance, and each entry aggregates the matching circuit probabilities.
Channel network_channel(const NetworkModel& net,
                        const ObservationLabeler& labeler = {},
                        const PathWeight& weight = {});

/// The bundled case study: four senders 1..4 relaying to R, node 3
/// eavesdropping. Arcs: 1->2, 2->3, 3->2, 2->4, 4->3, 2->R, 3->R.
NetworkModel four_node_onion_network();

}  // namespace leakcap
