#include "mpwsn/energy_ledger.hpp"

#include <algorithm>
#include <cmath>

#include "mpwsn/errors.hpp"

namespace mpwsn {

Picojoules to_picojoules(double joules) {
  if (!(joules >= 0.0)) throw InvalidParameter("energy amounts must be non-negative");
  return static_cast<Picojoules>(std::llround(joules * 1e12));
}

double to_joules(Picojoules pj) { return static_cast<double>(pj) * 1e-12; }

EnergyLedger::EnergyLedger(const TopologyGraph& g) {
  entries_.reserve(g.size());
  for (const auto& n : g.nodes()) {
    NodeEnergy e;
    e.initial = to_picojoules(n.residual_energy);
    entries_.push_back(e);
  }
}

bool EnergyLedger::charge(std::size_t device, EnergyComponent what, double joules) {
  auto& e = entries_.at(device);
  const Picojoules amount = std::min(to_picojoules(joules), e.residual());
  switch (what) {
    case EnergyComponent::Tx: e.tx += amount; break;
    case EnergyComponent::Rx: e.rx += amount; break;
    case EnergyComponent::Idle: e.idle += amount; break;
    case EnergyComponent::Sensing: e.sensing += amount; break;
  }
  return e.residual() == 0 && e.initial > 0;
}

void EnergyLedger::mark_active(std::size_t device, double since) {
  auto& e = entries_.at(device);
  if (!e.active) {
    e.active = true;
    e.active_since = since;
  }
}

void EnergyLedger::apply_to(TopologyGraph& g) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    g.set_residual_energy(i, to_joules(entries_[i].residual()));
  }
}

void account_idle_and_sensing(EnergyLedger& ledger, double duration, const TopologyGraph& g,
                              double sensing_power, double idle_power) {
  if (!(duration >= 0.0)) throw InvalidParameter("duration must be non-negative");
  if (duration == 0.0) return;
  for (std::size_t i = 0; i < ledger.size() && i < g.size(); ++i) {
    if (g.device(i).status != NodeStatus::Alive) continue;
    ledger.charge(i, EnergyComponent::Sensing, sensing_power * duration);
    const auto& e = ledger.at(i);
    if (e.active) {
      const double idle_time = std::max(0.0, duration - e.active_since - e.busy_time);
      ledger.charge(i, EnergyComponent::Idle, idle_power * idle_time);
    }
  }
}

}  // namespace mpwsn
