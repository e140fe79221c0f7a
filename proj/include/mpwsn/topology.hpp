#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mpwsn {

using NodeId = std::uint32_t;

enum class NodeStatus { Alive, Failed };

struct Position {
  double x{0};
  double y{0};
};

double distance(const Position& a, const Position& b);

/// A deployed sensor. `id` is the serial number used by routes; it can move
/// to a redundant device when the original holder fails.
struct Node {
  NodeId id{0};
  Position pos;
  double residual_energy{0};
  bool is_redundant{false};
  NodeStatus status{NodeStatus::Alive};
};

/// Deployed nodes plus connectivity. Two alive nodes are adjacent when they
/// are within radio range of each other or joined by an explicit link.
///
/// Devices are addressed by a stable index (insertion order) that never
/// changes; serial ids are unique across devices at all times.
class TopologyGraph {
 public:
  explicit TopologyGraph(double radio_range = 0.0) : radio_range_(radio_range) {}

  /// Returns the device index. Throws InvalidParameter on a duplicate id.
  std::size_t add_node(const Node& node);
  void add_link(NodeId u, NodeId v);

  double radio_range() const { return radio_range_; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const Node> nodes() const { return nodes_; }

  bool has_node(NodeId id) const { return index_.contains(id); }
  std::size_t device_of(NodeId id) const;
  const Node& node(NodeId id) const { return nodes_[device_of(id)]; }
  const Node& device(std::size_t index) const { return nodes_.at(index); }
  bool alive(NodeId id) const;

  /// Edge predicate: both alive and within range or explicitly linked.
  bool adjacent(NodeId u, NodeId v) const;
  /// Alive neighbours of an alive node, ascending id.
  std::vector<NodeId> neighbors(NodeId id) const;
  /// Neighbours of a node's location ignoring its own status, ascending id.
  std::vector<NodeId> neighbors_of_location(NodeId id) const;
  std::size_t degree(NodeId id) const { return neighbors(id).size(); }
  double distance(NodeId u, NodeId v) const;

  const std::set<std::pair<NodeId, NodeId>>& explicit_links() const { return links_; }

  void fail_node(NodeId id);
  void set_residual_energy(std::size_t device, double joules);
  void set_redundant(NodeId id, bool redundant);

  /// Gives `failed`'s serial number to the redundant device holding
  /// `replacement` and retires the failed device under the replacement's
  /// former id.
  void transfer_identity(NodeId failed, NodeId replacement);

  /// Incremented on every structural change (failure, replacement, new
  /// node or link).
  std::uint64_t version() const { return version_; }

 private:
  bool linked(NodeId u, NodeId v) const;
  bool in_range(std::size_t a, std::size_t b) const;

  double radio_range_;
  std::vector<Node> nodes_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::set<std::pair<NodeId, NodeId>> links_;
  std::uint64_t version_{0};
};

struct FieldSpec {
  double width{501};
  double height{501};
  std::size_t node_count{1000};
  std::uint64_t seed{1};
  double radio_range{24};
  double initial_energy{23760};
  double redundant_fraction{0.05};
};

/// Uniformly random deployment; ids 0..n-1. Deterministic for a given seed.
TopologyGraph deploy_field(const FieldSpec& spec);

/// One node per line: "id x y energy redundant_flag". Lines starting with
/// '#' and blank lines are ignored.
void write_topology(std::ostream& out, const TopologyGraph& g);
TopologyGraph read_topology(std::istream& in, double radio_range);

}  // namespace mpwsn
