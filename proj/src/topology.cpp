#include "mpwsn/topology.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "mpwsn/errors.hpp"

namespace mpwsn {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

namespace {

std::pair<NodeId, NodeId> ordered(NodeId u, NodeId v) { return u < v ? std::pair{u, v} : std::pair{v, u}; }

}  // namespace

std::size_t TopologyGraph::add_node(const Node& node) {
  if (index_.contains(node.id)) {
    throw InvalidParameter("duplicate node id " + std::to_string(node.id));
  }
  if (!(node.residual_energy >= 0.0)) throw InvalidParameter("node energy must be non-negative");
  nodes_.push_back(node);
  index_.emplace(node.id, nodes_.size() - 1);
  ++version_;
  return nodes_.size() - 1;
}

void TopologyGraph::add_link(NodeId u, NodeId v) {
  if (u == v) throw InvalidParameter("self link");
  device_of(u);
  device_of(v);
  links_.insert(ordered(u, v));
  ++version_;
}

std::size_t TopologyGraph::device_of(NodeId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw InvalidParameter("unknown node id " + std::to_string(id));
  return it->second;
}

bool TopologyGraph::alive(NodeId id) const {
  const auto it = index_.find(id);
  return it != index_.end() && nodes_[it->second].status == NodeStatus::Alive;
}

bool TopologyGraph::linked(NodeId u, NodeId v) const { return links_.contains(ordered(u, v)); }

bool TopologyGraph::in_range(std::size_t a, std::size_t b) const {
  return radio_range_ > 0.0 && mpwsn::distance(nodes_[a].pos, nodes_[b].pos) <= radio_range_;
}

bool TopologyGraph::adjacent(NodeId u, NodeId v) const {
  if (u == v || !alive(u) || !alive(v)) return false;
  return linked(u, v) || in_range(device_of(u), device_of(v));
}

std::vector<NodeId> TopologyGraph::neighbors_of_location(NodeId id) const {
  const std::size_t self = device_of(id);
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (i == self || nodes_[i].status != NodeStatus::Alive) continue;
    if (linked(id, nodes_[i].id) || in_range(self, i)) out.push_back(nodes_[i].id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> TopologyGraph::neighbors(NodeId id) const {
  if (!alive(id)) return {};
  return neighbors_of_location(id);
}

double TopologyGraph::distance(NodeId u, NodeId v) const {
  return mpwsn::distance(node(u).pos, node(v).pos);
}

void TopologyGraph::fail_node(NodeId id) {
  auto& n = nodes_[device_of(id)];
  if (n.status != NodeStatus::Failed) {
    n.status = NodeStatus::Failed;
    ++version_;
  }
}

void TopologyGraph::set_residual_energy(std::size_t device, double joules) {
  nodes_.at(device).residual_energy = std::max(0.0, joules);
}

void TopologyGraph::set_redundant(NodeId id, bool redundant) {
  nodes_[device_of(id)].is_redundant = redundant;
}

void TopologyGraph::transfer_identity(NodeId failed, NodeId replacement) {
  const std::size_t f = device_of(failed);
  const std::size_t r = device_of(replacement);
  if (f == r) throw InvalidParameter("a node cannot replace itself");
  nodes_[f].id = replacement;
  nodes_[r].id = failed;
  nodes_[r].is_redundant = false;
  index_[failed] = r;
  index_[replacement] = f;
  // Explicit links belong to the serial number, so the new holder inherits
  // them; the retired device had none as a spare.
  ++version_;
}

TopologyGraph deploy_field(const FieldSpec& spec) {
  if (!(spec.width > 0.0) || !(spec.height > 0.0)) {
    throw InvalidParameter("field dimensions must be positive");
  }
  TopologyGraph g(spec.radio_range);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> ux(0.0, spec.width);
  std::uniform_real_distribution<double> uy(0.0, spec.height);
  for (std::size_t i = 0; i < spec.node_count; ++i) {
    Node n;
    n.id = static_cast<NodeId>(i);
    n.pos = {ux(rng), uy(rng)};
    n.residual_energy = spec.initial_energy;
    g.add_node(n);
  }
  const auto spares = static_cast<std::size_t>(
      std::llround(spec.redundant_fraction * static_cast<double>(spec.node_count)));
  std::vector<NodeId> ids(spec.node_count);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  std::shuffle(ids.begin(), ids.end(), rng);
  for (std::size_t i = 0; i < std::min(spares, ids.size()); ++i) g.set_redundant(ids[i], true);
  return g;
}

void write_topology(std::ostream& out, const TopologyGraph& g) {
  out.precision(17);
  for (const auto& n : g.nodes()) {
    out << n.id << ' ' << n.pos.x << ' ' << n.pos.y << ' ' << n.residual_energy << ' '
        << (n.is_redundant ? 1 : 0) << '\n';
  }
}

TopologyGraph read_topology(std::istream& in, double radio_range) {
  TopologyGraph g(radio_range);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long long id = -1;
    Node n;
    int flag = -1;
    std::string extra;
    if (!(ls >> id >> n.pos.x >> n.pos.y >> n.residual_energy >> flag) || (ls >> extra) ||
        id < 0 || (flag != 0 && flag != 1)) {
      throw InvalidParameter("topology line " + std::to_string(lineno) +
                             ": expected 'id x y energy redundant_flag'");
    }
    n.id = static_cast<NodeId>(id);
    n.is_redundant = flag == 1;
    try {
      g.add_node(n);
    } catch (const InvalidParameter& e) {
      throw InvalidParameter("topology line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return g;
}

}  // namespace mpwsn
