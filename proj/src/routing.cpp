#include "mpwsn/routing.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "mpwsn/core/model.hpp"
#include "mpwsn/errors.hpp"

namespace mpwsn {

namespace {

constexpr int kUnreached = std::numeric_limits<int>::max();

// Hop-count shortest path with unit weights, lexicographically smallest among
// equals: distances are computed from the sink, then the walk from the source
// always takes the lowest-id neighbour one hop closer.
std::optional<std::vector<NodeId>> shortest_path(const TopologyGraph& g, NodeId source,
                                                 NodeId sink,
                                                 const std::unordered_set<NodeId>& removed,
                                                 bool allow_direct) {
  const auto relay_ok = [&](NodeId id) {
    return id != source && id != sink && !removed.contains(id) && g.alive(id) &&
           !g.node(id).is_redundant;
  };
  std::unordered_map<NodeId, int> dist;
  dist[sink] = 0;
  std::deque<NodeId> queue{sink};
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : g.neighbors(u)) {
      if (!relay_ok(v) || dist.contains(v)) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  const auto dist_of = [&](NodeId id) {
    const auto it = dist.find(id);
    return it == dist.end() ? kUnreached : it->second;
  };

  std::vector<NodeId> path{source};
  NodeId cur = source;
  while (cur != sink) {
    std::optional<NodeId> next;
    int best = kUnreached;
    for (NodeId v : g.neighbors(cur)) {
      if (v == sink && cur == source && !allow_direct) continue;
      if (v != sink && !relay_ok(v)) continue;
      const int d = dist_of(v);
      if (d == kUnreached) continue;
      if (cur != source && d != dist_of(cur) - 1) continue;
      if (d < best) {  // neighbours arrive in ascending id order
        best = d;
        next = v;
      }
    }
    if (!next) return std::nullopt;
    path.push_back(*next);
    cur = *next;
  }
  return path;
}

}  // namespace

std::vector<Route> discover_disjoint_paths(const TopologyGraph& g, NodeId source, NodeId sink,
                                           int max_paths) {
  if (source == sink) throw InvalidParameter("source and sink must differ");
  if (!g.alive(source) || !g.alive(sink)) {
    throw InvalidParameter("source and sink must both be alive");
  }
  std::vector<Route> routes;
  std::unordered_set<NodeId> removed;
  bool direct_used = false;
  while (max_paths <= 0 || static_cast<int>(routes.size()) < max_paths) {
    auto path = shortest_path(g, source, sink, removed, !direct_used);
    if (!path) break;
    if (path->size() == 2) direct_used = true;
    for (std::size_t i = 1; i + 1 < path->size(); ++i) removed.insert((*path)[i]);
    Route r;
    r.nodes = std::move(*path);
    r.profile.path_id = static_cast<int>(routes.size()) + 1;
    r.profile.hops = r.hops();
    r.params.hops = r.hops();
    routes.push_back(std::move(r));
  }
  return routes;
}

PathProfiled estimate_path_params(const TopologyGraph& g, Route& route, const LinkParamsd& forward,
                                  TauMode mode, const EnergyParamsd& energy,
                                  const std::optional<LinkParamsd>& reverse) {
  if (route.nodes.size() < 2) throw InvalidParameter("route needs at least one hop");
  for (NodeId id : route.nodes) {
    if (!g.alive(id)) throw StaleRouteError("route passes through failed node " + std::to_string(id));
  }
  forward.validate();
  const int hops = route.hops();
  double tau = 0.0;
  if (mode == TauMode::Analytic) {
    tau = per_hop_delay(energy.packet_bits, forward);
  } else {
    const LinkParamsd back = reverse.value_or(forward);
    back.validate();
    // hello out to the destination, reply back to the source
    double clock = 0.0;
    for (int h = 0; h < hops; ++h) clock += per_hop_delay(energy.packet_bits, forward);
    for (int h = 0; h < hops; ++h) clock += per_hop_delay(energy.packet_bits, back);
    tau = clock / (2.0 * hops);
  }
  route.profile.hops = hops;
  route.profile.tau = tau;
  route.profile.distance = g.distance(route.nodes.front(), route.nodes.back());
  route.params = {energy.sensing_power, hops,  energy.tx_power, energy.amp_coeff,
                  energy.tx_bit_time,   energy.rx_bit_time, tau};
  return route.profile;
}

const std::vector<Route>* RoutingTable::routes_to(NodeId destination) const {
  const auto it = entries.find(destination);
  return it == entries.end() ? nullptr : &it->second;
}

std::vector<Route>* RoutingTable::routes_to(NodeId destination) {
  const auto it = entries.find(destination);
  return it == entries.end() ? nullptr : &it->second;
}

RoutingTable build_routing_table(const TopologyGraph& g, NodeId source,
                                 const std::vector<NodeId>& destinations,
                                 const DiscoveryOptions& options) {
  if (!g.alive(source)) throw InvalidParameter("source must be alive");
  RoutingTable table;
  table.source = source;
  table.topology_version = g.version();
  for (NodeId dest : destinations) {
    if (dest == source) throw InvalidParameter("a node keeps no routing entry for itself");
    if (!g.alive(dest)) continue;
    auto routes = discover_disjoint_paths(g, source, dest, options.max_paths);
    if (routes.empty()) continue;
    for (auto& r : routes) {
      estimate_path_params(g, r, options.link, options.mode, options.energy, options.reverse_link);
    }
    table.entries[dest] = std::move(routes);
  }
  return table;
}

ReplacementResult replace_failed_node(TopologyGraph& g, NodeId failed_id, RoutingTable* table,
                                      std::optional<NodeId> initiator) {
  const std::size_t failed_device = g.device_of(failed_id);
  g.fail_node(failed_id);
  const Position anchor =
      initiator && g.has_node(*initiator) ? g.node(*initiator).pos : g.node(failed_id).pos;

  std::optional<std::size_t> best;
  double best_dist = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Node& n = g.device(i);
    if (!n.is_redundant || n.status != NodeStatus::Alive) continue;
    const double d = distance(anchor, n.pos);
    if (!best || d < best_dist || (d == best_dist && n.id < g.device(*best).id)) {
      best = i;
      best_dist = d;
    }
  }
  if (!best) {
    throw UnrecoverableFailure("no redundant node available to replace " +
                               std::to_string(failed_id));
  }

  ReplacementResult result;
  result.failed_id = failed_id;
  result.failed_device = failed_device;
  result.replacement_device = *best;
  result.replacement_former_id = g.device(*best).id;

  std::vector<NodeId> notified = g.neighbors_of_location(failed_id);
  if (table) {
    for (auto& [dest, routes] : table->entries) {
      for (auto& r : routes) {
        const auto it = std::find(r.nodes.begin(), r.nodes.end(), failed_id);
        if (it == r.nodes.end()) continue;
        ++result.routes_updated;
        if (it != r.nodes.begin()) notified.push_back(*(it - 1));
        if (it + 1 != r.nodes.end()) notified.push_back(*(it + 1));
      }
    }
  }
  g.transfer_identity(failed_id, result.replacement_former_id);
  std::sort(notified.begin(), notified.end());
  notified.erase(std::unique(notified.begin(), notified.end()), notified.end());
  std::erase(notified, failed_id);
  std::erase(notified, result.replacement_former_id);
  result.notified = std::move(notified);
  // Routes name nodes by serial number, so they stay valid as written; the
  // table now reflects the current topology.
  if (table) table->topology_version = g.version();
  return result;
}

void write_routes(std::ostream& out, const std::vector<Route>& routes) {
  for (const auto& r : routes) {
    out << r.profile.path_id << ": ";
    for (std::size_t i = 0; i < r.nodes.size(); ++i) out << (i ? "," : "") << r.nodes[i];
    out << '\n';
  }
}

std::vector<Route> read_routes(std::istream& in) {
  std::vector<Route> routes;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto colon = line.find(':');
    const auto bad = [&] {
      return InvalidParameter("route line " + std::to_string(lineno) +
                              ": expected 'path_id: id,id,...'");
    };
    if (colon == std::string::npos) throw bad();
    Route r;
    try {
      r.profile.path_id = std::stoi(line.substr(0, colon));
      std::istringstream ids(line.substr(colon + 1));
      std::string tok;
      while (std::getline(ids, tok, ',')) r.nodes.push_back(static_cast<NodeId>(std::stoul(tok)));
    } catch (const std::logic_error&) {
      throw bad();
    }
    if (r.nodes.size() < 2) throw bad();
    r.profile.hops = r.hops();
    r.params.hops = r.hops();
    routes.push_back(std::move(r));
  }
  return routes;
}

}  // namespace mpwsn
