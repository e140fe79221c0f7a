#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mpwsn/distributor.hpp"
#include "mpwsn/energy_ledger.hpp"
#include "mpwsn/routing.hpp"

namespace mpwsn {

enum class EventKind {
  PacketArrive,
  PacketSend,
  AckTimeout,
  BeaconSend,
  BeaconResult,
  TimerExpire,
  FaultTrigger
};

std::string_view to_string(EventKind kind);

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

struct SimEvent {
  double time{0};
  std::uint64_t sequence{0};
  EventKind kind{EventKind::PacketSend};
  int path{-1};  ///< index into the transfer's path list, -1 if none
  NodeId from{kNoNode};
  NodeId to{kNoNode};
  Packets packet{-1};
  int attempt{0};
  int hop{-1};       ///< index of the sending node within the route
  double sent_at{0};  ///< start of the first attempt of this hop
  std::uint64_t incident{0};
  int fault{-1};  ///< index into the fault script for FaultTrigger
};

/// Min-queue on (time, sequence). Sequence numbers are handed out at push,
/// so simultaneous events run in the order they were scheduled.
class EventQueue {
 public:
  const SimEvent& push(SimEvent ev);
  /// Throws std::logic_error if the popped event precedes the previous one.
  SimEvent pop();
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      return a.time != b.time ? a.time > b.time : a.sequence > b.sequence;
    }
  };
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
  std::uint64_t next_seq_{0};
  std::optional<std::pair<double, std::uint64_t>> last_;
};

enum class FaultKind { NodeFail, LinkFail };

struct FaultAction {
  double time{0};
  FaultKind kind{FaultKind::NodeFail};
  NodeId node{0};  ///< NodeFail target
  NodeId u{0};     ///< LinkFail endpoints
  NodeId v{0};
};

using FaultScript = std::vector<FaultAction>;

enum class FaultCase {
  SenderFaulty = 1,      ///< Case 1: node a is at fault
  ReceiverOrLink = 2,    ///< Case 2: node b or the a-b link is at fault
};

enum class Detection { Beacon, Timer, NoNeighborFallback };

std::string_view to_string(FaultCase c);
std::string_view to_string(Detection d);

/// Down links, stored by device so that they stay down after a serial
/// number moves to a replacement.
class LinkState {
 public:
  void fail(std::size_t device_a, std::size_t device_b);
  bool up(const TopologyGraph& g, NodeId a, NodeId b) const;

 private:
  std::set<std::pair<std::size_t, std::size_t>> down_;
};

struct BeaconCheck {
  std::optional<NodeId> neighbor;  ///< c, if a has one besides b
  bool beacon_ok{false};
  FaultCase verdict{FaultCase::SenderFaulty};
  Detection detection{Detection::Beacon};
};

/// Self-check of sender `a` after m failed deliveries to `b`: beacon to the
/// lowest-id alive neighbour c != b. Failure (or no c) blames a.
BeaconCheck classify_fault(const TopologyGraph& g, const LinkState& links, NodeId a, NodeId b);

struct FaultRecord {
  int path_id{0};
  NodeId sender{0};    ///< a
  NodeId receiver{0};  ///< b
  double first_attempt{0};
  double expected_arrival{0};
  double concluded_at{0};
  FaultCase verdict{FaultCase::SenderFaulty};
  Detection detection{Detection::Beacon};
  NodeId initiator{0};
  NodeId failed_id{0};
  bool recovered{false};
  std::size_t replacement_device{0};
  NodeId replacement_former_id{0};
  double resumed_at{0};
  /// Conclusions reached after recovery had already started (the other
  /// detector losing the race). Time and verdict.
  std::vector<std::pair<double, FaultCase>> late_conclusions;
  /// When the downstream timer fired, if it fired.
  std::optional<double> timer_fired_at;
};

struct PathResult {
  int path_id{0};
  int hops{0};
  double tau{0};
  Packets assigned{0};
  Packets delivered{0};
  Packets dropped{0};
  double delivery_time{0};
  int retransmissions{0};
  bool failed{false};
  double traffic_energy{0};  ///< data tx + rx charged to this path's nodes
};

struct NodeSnapshot {
  std::size_t device{0};
  NodeId id{0};
  NodeEnergy energy;
};

struct TransferReport {
  std::vector<PathResult> paths;
  double completion_time{0};
  Packets total{0};
  Packets delivered{0};
  Packets dropped{0};
  std::vector<FaultRecord> faults;
  std::vector<NodeSnapshot> ledger;

  /// Canonical text rendering; identical inputs give identical bytes.
  std::string to_text() const;
};

struct TransferConfig {
  EnergyParamsd energy;
  LinkParamsd link;
  int max_attempts{5};       ///< m
  double control_bits{100};  ///< beacon and notification size
  double idle_power{0};
  double loss_probability{0};  ///< independent loss per data attempt
  std::uint64_t seed{1};
};

struct TransferProgress {
  Packets total{0};
  Packets delivered{0};
  Packets dropped{0};
  Packets in_network{0};
  Packets queued{0};
};

using EventObserver = std::function<void(const SimEvent&, const TransferProgress&)>;

/// Discrete-event engine for one transfer round at a time.
class Simulator {
 public:
  void set_trace(std::ostream* out) { trace_ = out; }
  void set_observer(EventObserver obs) { observer_ = std::move(obs); }
  bool active() const { return active_; }

  /// Runs every path of `dist` concurrently over the routes the table holds
  /// for `destination`. Mutates `g` (failures, replacements, residual
  /// energy) and `table` (replacements). Throws TransferInProgress when
  /// called while a transfer is running.
  TransferReport run_transfer(TopologyGraph& g, RoutingTable& table, NodeId destination,
                              const Distributiond& dist, const FaultScript& faults,
                              const TransferConfig& config);

 private:
  std::ostream* trace_{nullptr};
  EventObserver observer_;
  bool active_{false};
};

}  // namespace mpwsn
