#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "mpwsn/core/params.hpp"
#include "mpwsn/topology.hpp"

namespace mpwsn {

/// Parameters a source learns about a path during discovery.
struct RouteParams {
  double sensing_power{0};
  int hops{0};
  double tx_power{0};
  double amp_coeff{0};
  double tx_bit_time{0};
  double rx_bit_time{0};
  double tau{0};
};

struct Route {
  std::vector<NodeId> nodes;  // source first, destination last
  PathProfiled profile;
  RouteParams params;

  int hops() const { return static_cast<int>(nodes.size()) - 1; }
};

/// Repeated hop-count shortest path with removal of each found path's
/// interior nodes. Redundant nodes are never used as relays. Ties go to the
/// lexicographically smallest node sequence. Routes are numbered 1.. in
/// discovery order; profiles carry only path_id and hops.
std::vector<Route> discover_disjoint_paths(const TopologyGraph& g, NodeId source, NodeId sink,
                                           int max_paths);

enum class TauMode { Analytic, Probed };

/// Fills the route's profile and parameter bundle. In probed mode a hello
/// travels to the destination over `forward` links and the reply returns
/// over `reverse` (defaults to `forward`); tau = RTT / (2 H).
PathProfiled estimate_path_params(const TopologyGraph& g, Route& route, const LinkParamsd& forward,
                                  TauMode mode, const EnergyParamsd& energy,
                                  const std::optional<LinkParamsd>& reverse = std::nullopt);

struct DiscoveryOptions {
  int max_paths{5};
  LinkParamsd link;
  std::optional<LinkParamsd> reverse_link;
  TauMode mode{TauMode::Analytic};
  EnergyParamsd energy;
};

class RoutingTable {
 public:
  NodeId source{0};
  std::uint64_t topology_version{0};
  std::map<NodeId, std::vector<Route>> entries;

  const std::vector<Route>* routes_to(NodeId destination) const;
  std::vector<Route>* routes_to(NodeId destination);
  bool is_stale(const TopologyGraph& g) const { return g.version() != topology_version; }
};

RoutingTable build_routing_table(const TopologyGraph& g, NodeId source,
                                 const std::vector<NodeId>& destinations,
                                 const DiscoveryOptions& options);

struct ReplacementResult {
  NodeId failed_id{0};
  std::size_t failed_device{0};
  std::size_t replacement_device{0};
  NodeId replacement_former_id{0};
  std::vector<NodeId> notified;  // neighbours told about the new holder
  int routes_updated{0};
};

/// Picks the alive redundant node nearest to `initiator` (or to the failed
/// node when no initiator is given; ties to the lowest id), hands it the
/// failed node's serial number and refreshes the table in place. Throws
/// UnrecoverableFailure when no redundant node is left.
ReplacementResult replace_failed_node(TopologyGraph& g, NodeId failed_id, RoutingTable* table,
                                      std::optional<NodeId> initiator = std::nullopt);

/// "path_id: id,id,...,id" per line.
void write_routes(std::ostream& out, const std::vector<Route>& routes);
std::vector<Route> read_routes(std::istream& in);

}  // namespace mpwsn
