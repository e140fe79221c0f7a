#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpwsn/topology.hpp"

namespace mpwsn {

/// Energy is booked in whole picojoules so that initial - residual equals the
/// sum of the components exactly.
using Picojoules = std::int64_t;

Picojoules to_picojoules(double joules);
double to_joules(Picojoules pj);

enum class EnergyComponent { Tx, Rx, Idle, Sensing };

struct NodeEnergy {
  Picojoules initial{0};
  Picojoules tx{0};
  Picojoules rx{0};
  Picojoules idle{0};
  Picojoules sensing{0};
  double busy_time{0};     ///< seconds spent transmitting or receiving
  double active_since{0};  ///< start of the idle-accounting window
  bool active{false};      ///< relays traffic this round

  Picojoules consumed() const { return tx + rx + idle + sensing; }
  Picojoules residual() const { return initial - consumed(); }
};

/// Per-device energy book for one transfer round, indexed like
/// TopologyGraph devices.
class EnergyLedger {
 public:
  EnergyLedger() = default;
  explicit EnergyLedger(const TopologyGraph& g);

  /// Books up to `joules` (never below zero residual). Returns true when
  /// the device is now depleted.
  bool charge(std::size_t device, EnergyComponent what, double joules);
  void add_busy(std::size_t device, double seconds) { entries_.at(device).busy_time += seconds; }
  void mark_active(std::size_t device, double since);

  const NodeEnergy& at(std::size_t device) const { return entries_.at(device); }
  std::size_t size() const { return entries_.size(); }
  std::span<const NodeEnergy> entries() const { return entries_; }

  /// Writes residual energies back to the graph.
  void apply_to(TopologyGraph& g) const;

 private:
  std::vector<NodeEnergy> entries_;
};

/// Charges K_r * duration of sensing to every alive device, and idle radio
/// power over (window - busy) to every active device. `duration` is the
/// round length; an active device's window starts at its active_since.
void account_idle_and_sensing(EnergyLedger& ledger, double duration, const TopologyGraph& g,
                              double sensing_power, double idle_power);

}  // namespace mpwsn
