#include "mpwsn/simulator.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mpwsn/core/model.hpp"
#include "mpwsn/errors.hpp"

namespace mpwsn {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::PacketArrive: return "PacketArrive";
    case EventKind::PacketSend: return "PacketSend";
    case EventKind::AckTimeout: return "AckTimeout";
    case EventKind::BeaconSend: return "BeaconSend";
    case EventKind::BeaconResult: return "BeaconResult";
    case EventKind::TimerExpire: return "TimerExpire";
    case EventKind::FaultTrigger: return "FaultTrigger";
  }
  return "Unknown";
}

std::string_view to_string(FaultCase c) {
  return c == FaultCase::SenderFaulty ? "case1_sender" : "case2_receiver_or_link";
}

std::string_view to_string(Detection d) {
  switch (d) {
    case Detection::Beacon: return "beacon";
    case Detection::Timer: return "timer";
    case Detection::NoNeighborFallback: return "no_neighbor_fallback";
  }
  return "unknown";
}

const SimEvent& EventQueue::push(SimEvent ev) {
  if (!(ev.time >= 0.0)) throw std::logic_error("event time must be non-negative");
  if (last_ && ev.time < last_->first) throw std::logic_error("event scheduled in the past");
  ev.sequence = next_seq_++;
  heap_.push(ev);
  return heap_.top();
}

SimEvent EventQueue::pop() {
  SimEvent ev = heap_.top();
  heap_.pop();
  if (last_ && (ev.time < last_->first ||
                (ev.time == last_->first && ev.sequence < last_->second))) {
    throw std::logic_error("event processed out of (time, sequence) order");
  }
  last_ = {ev.time, ev.sequence};
  return ev;
}

void LinkState::fail(std::size_t device_a, std::size_t device_b) {
  down_.insert(device_a < device_b ? std::pair{device_a, device_b} : std::pair{device_b, device_a});
}

bool LinkState::up(const TopologyGraph& g, NodeId a, NodeId b) const {
  const std::size_t da = g.device_of(a);
  const std::size_t db = g.device_of(b);
  return !down_.contains(da < db ? std::pair{da, db} : std::pair{db, da});
}

namespace {

std::optional<NodeId> beacon_neighbor(const TopologyGraph& g, NodeId a, NodeId b) {
  for (NodeId c : g.neighbors_of_location(a)) {
    if (c != b) return c;
  }
  return std::nullopt;
}

bool beacon_delivered(const TopologyGraph& g, const LinkState& links, NodeId a, NodeId c) {
  return g.alive(a) && g.alive(c) && links.up(g, a, c);
}

}  // namespace

BeaconCheck classify_fault(const TopologyGraph& g, const LinkState& links, NodeId a, NodeId b) {
  BeaconCheck check;
  check.neighbor = beacon_neighbor(g, a, b);
  if (!check.neighbor) {
    check.verdict = FaultCase::SenderFaulty;
    check.detection = Detection::NoNeighborFallback;
    return check;
  }
  check.beacon_ok = beacon_delivered(g, links, a, *check.neighbor);
  check.verdict = check.beacon_ok ? FaultCase::ReceiverOrLink : FaultCase::SenderFaulty;
  check.detection = Detection::Beacon;
  return check;
}

namespace {

struct Incident {
  bool open{false};
  bool concluded{false};
  std::uint64_t serial{0};
  std::size_t hop{0};
  double first_attempt{0};
  double expected_arrival{0};
  bool timer_scheduled{false};
};

struct PathRun {
  std::vector<NodeId> nodes;
  PathResult result;
  double hop_distance{0};
  Packets injected{0};
  bool carrying{false};
  Incident incident;
  Picojoules traffic{0};
};

// One transfer round. Holds references to the caller's topology and table
// for the lifetime of run().
class Engine {
 public:
  Engine(TopologyGraph& g, RoutingTable& table, const std::vector<Route>& routes,
         const Distributiond& dist, const FaultScript& faults, const TransferConfig& cfg,
         std::ostream* trace, const EventObserver& observer)
      : g_(g),
        table_(table),
        faults_(faults),
        cfg_(cfg),
        trace_(trace),
        observer_(observer),
        ledger_(g),
        rng_(cfg.seed),
        settled_(g.size(), false) {
    cfg_.energy.validate();
    cfg_.link.validate();
    if (cfg_.max_attempts < 1) throw InvalidParameter("max attempts must be at least 1");
    if (cfg_.loss_probability < 0.0 || cfg_.loss_probability > 1.0) {
      throw InvalidParameter("loss probability must lie in [0, 1]");
    }
    for (const auto& a : dist.allocations) {
      const auto it = std::find_if(routes.begin(), routes.end(), [&](const Route& r) {
        return r.profile.path_id == a.path_id;
      });
      if (it == routes.end()) {
        throw InvalidParameter("distribution references unknown path " +
                               std::to_string(a.path_id));
      }
      if (a.packets < 0) throw InvalidParameter("negative packet allocation");
      PathRun run;
      run.nodes = it->nodes;
      run.result.path_id = a.path_id;
      run.result.hops = it->hops();
      run.result.tau = it->profile.tau > 0.0
                           ? it->profile.tau
                           : per_hop_delay(cfg_.energy.packet_bits, cfg_.link);
      run.result.assigned = a.packets;
      run.hop_distance = it->profile.distance > 0.0 ? it->profile.distance / it->hops() : 0.0;
      paths_.push_back(std::move(run));
    }
    for (const auto& f : faults_) {
      if (!(f.time >= 0.0)) throw InvalidParameter("fault trigger times must be non-negative");
      if (f.kind == FaultKind::NodeFail) {
        g_.device_of(f.node);
      } else {
        g_.device_of(f.u);
        g_.device_of(f.v);
      }
    }
    report_.total = dist.total;
    progress_.total = dist.total;
    progress_.queued = dist.total;
    ctrl_hop_ = per_hop_delay(cfg_.control_bits, cfg_.link);
    data_air_ = cfg_.energy.packet_bits / cfg_.link.bit_rate;
    ctrl_air_ = cfg_.control_bits / cfg_.link.bit_rate;
  }

  TransferReport run() {
    for (std::size_t i = 0; i < faults_.size(); ++i) {
      SimEvent ev;
      ev.time = faults_[i].time;
      ev.kind = EventKind::FaultTrigger;
      ev.fault = static_cast<int>(i);
      queue_.push(ev);
    }
    for (std::size_t p = 0; p < paths_.size(); ++p) {
      if (paths_[p].result.assigned == 0) continue;
      for (NodeId id : paths_[p].nodes) ledger_.mark_active(g_.device_of(id), 0.0);
    }
    for (std::size_t p = 0; p < paths_.size(); ++p) {
      if (paths_[p].result.assigned > 0) inject(p, 0.0);
    }
    while (!queue_.empty()) {
      const SimEvent ev = queue_.pop();
      dispatch(ev);
      check_conservation();
      if (observer_) observer_(ev, progress_);
    }
    finish();
    return std::move(report_);
  }

 private:
  void dispatch(const SimEvent& ev) {
    switch (ev.kind) {
      case EventKind::FaultTrigger: on_fault(ev); break;
      case EventKind::PacketSend: on_send(ev); break;
      case EventKind::PacketArrive: on_arrive(ev); break;
      case EventKind::BeaconSend: on_beacon_send(ev); break;
      case EventKind::BeaconResult: on_beacon_result(ev); break;
      case EventKind::TimerExpire: on_timer(ev); break;
      case EventKind::AckTimeout: break;
    }
  }

  void trace(double t, EventKind kind, NodeId from, NodeId to, Packets packet, int path) {
    if (!trace_) return;
    char buf[160];
    const auto id = [](NodeId n) { return n == kNoNode ? -1LL : static_cast<long long>(n); };
    std::snprintf(buf, sizeof buf, "%.9f %s %lld %lld %lld %d\n", t,
                  std::string(to_string(kind)).c_str(), id(from), id(to),
                  static_cast<long long>(packet), path);
    *trace_ << buf;
  }

  int path_id(int p) const { return p < 0 ? -1 : paths_[static_cast<std::size_t>(p)].result.path_id; }

  // --- energy -------------------------------------------------------------

  void charge(NodeId id, EnergyComponent what, double joules, double t, double busy,
              PathRun* traffic_path = nullptr) {
    const std::size_t dev = g_.device_of(id);
    const Picojoules before = ledger_.at(dev).consumed();
    const bool depleted = ledger_.charge(dev, what, joules);
    if (traffic_path) traffic_path->traffic += ledger_.at(dev).consumed() - before;
    if (busy > 0.0) ledger_.add_busy(dev, busy);
    if (depleted && g_.alive(id)) {
      g_.fail_node(id);
      settle(dev, t);
    }
  }

  double data_tx_energy(const PathRun& run) const {
    return tx_energy_per_bit(cfg_.energy, run.hop_distance) * cfg_.energy.packet_bits;
  }
  double data_rx_energy() const { return rx_energy_per_bit(cfg_.energy) * cfg_.energy.packet_bits; }
  double ctrl_tx_energy(const PathRun& run) const {
    return tx_energy_per_bit(cfg_.energy, run.hop_distance) * cfg_.control_bits;
  }
  double ctrl_rx_energy() const { return rx_energy_per_bit(cfg_.energy) * cfg_.control_bits; }

  // Sensing and idle cost of a device that stops at time t.
  void settle(std::size_t dev, double t) {
    if (settled_[dev]) return;
    settled_[dev] = true;
    ledger_.charge(dev, EnergyComponent::Sensing, cfg_.energy.sensing_power * t);
    const auto& e = ledger_.at(dev);
    if (e.active) {
      ledger_.charge(dev, EnergyComponent::Idle,
                     cfg_.idle_power * std::max(0.0, t - e.active_since - e.busy_time));
    }
  }

  // --- packet flow ----------------------------------------------------------

  void inject(std::size_t p, double t) {
    auto& run = paths_[p];
    const Packets packet = run.injected++;
    run.carrying = true;
    --progress_.queued;
    ++progress_.in_network;
    // The source and the sink each pay one extra radio turnaround per
    // packet (intake at the source, end-to-end acknowledgement at the
    // sink), so every one of the H+1 path nodes spends (E_t + E_r) S.
    charge(run.nodes.front(), EnergyComponent::Rx, data_rx_energy(), t, 0.0, &run);
    schedule_send(p, 0, 1, t, t, packet);
  }

  void schedule_send(std::size_t p, std::size_t hop, int attempt, double t, double sent_at,
                     Packets packet) {
    SimEvent ev;
    ev.time = t;
    ev.kind = EventKind::PacketSend;
    ev.path = static_cast<int>(p);
    ev.hop = static_cast<int>(hop);
    ev.from = paths_[p].nodes[hop];
    ev.to = paths_[p].nodes[hop + 1];
    ev.packet = packet;
    ev.attempt = attempt;
    ev.sent_at = sent_at;
    queue_.push(ev);
  }

  Incident& open_incident(std::size_t p, std::size_t hop, double first_attempt) {
    auto& inc = paths_[p].incident;
    if (!inc.open) {
      inc = Incident{};
      inc.open = true;
      inc.serial = ++incident_serial_;
      inc.hop = hop;
      inc.first_attempt = first_attempt;
      inc.expected_arrival = first_attempt + paths_[p].result.tau;
    }
    return inc;
  }

  // Downstream node b (or the next alive one) waits m*tau past the expected
  // arrival before blaming the sender.
  void arm_timer(std::size_t p, Incident& inc) {
    if (inc.timer_scheduled) return;
    const auto& nodes = paths_[p].nodes;
    std::optional<NodeId> detector;
    for (std::size_t i = inc.hop + 1; i < nodes.size(); ++i) {
      if (g_.alive(nodes[i])) {
        detector = nodes[i];
        break;
      }
    }
    if (!detector) return;
    inc.timer_scheduled = true;
    SimEvent ev;
    ev.time = inc.expected_arrival + cfg_.max_attempts * paths_[p].result.tau;
    ev.kind = EventKind::TimerExpire;
    ev.path = static_cast<int>(p);
    ev.hop = static_cast<int>(inc.hop);
    ev.from = nodes[inc.hop];
    ev.to = *detector;
    ev.incident = inc.serial;
    queue_.push(ev);
  }

  void on_send(const SimEvent& ev) {
    const auto p = static_cast<std::size_t>(ev.path);
    auto& run = paths_[p];
    if (run.result.failed) return;
    trace(ev.time, EventKind::PacketSend, ev.from, ev.to, ev.packet, run.result.path_id);
    if (!g_.alive(ev.from)) {
      // The sender died holding the packet.
      auto& inc = open_incident(p, static_cast<std::size_t>(ev.hop), ev.sent_at);
      arm_timer(p, inc);
      return;
    }
    charge(ev.from, EnergyComponent::Tx, data_tx_energy(run), ev.time, data_air_, &run);
    SimEvent next = ev;
    next.time = ev.time + run.result.tau;
    next.kind = EventKind::PacketArrive;
    queue_.push(next);
  }

  void on_arrive(const SimEvent& ev) {
    const auto p = static_cast<std::size_t>(ev.path);
    auto& run = paths_[p];
    if (run.result.failed) return;
    const NodeId a = ev.from;
    const NodeId b = ev.to;
    const bool radio_ok = g_.alive(a) && g_.alive(b) && links_.up(g_, a, b);
    bool delivered = radio_ok;
    if (radio_ok && cfg_.loss_probability > 0.0) {
      delivered = std::uniform_real_distribution<double>(0.0, 1.0)(rng_) >= cfg_.loss_probability;
    }
    trace(ev.time, delivered ? EventKind::PacketArrive : EventKind::AckTimeout, a, b, ev.packet,
          run.result.path_id);

    if (delivered) {
      charge(b, EnergyComponent::Rx, data_rx_energy(), ev.time, data_air_, &run);
      if (run.incident.open && run.incident.hop == static_cast<std::size_t>(ev.hop)) {
        run.incident.open = false;  // a retry got through
      }
      const auto next_hop = static_cast<std::size_t>(ev.hop) + 1;
      if (next_hop + 1 == run.nodes.size()) {
        charge(b, EnergyComponent::Tx, data_tx_energy(run), ev.time, 0.0, &run);
        ++run.result.delivered;
        ++report_.delivered;
        ++progress_.delivered;
        --progress_.in_network;
        run.carrying = false;
        run.result.delivery_time = ev.time;
        if (run.injected < run.result.assigned) inject(p, ev.time);
      } else {
        schedule_send(p, next_hop, 1, ev.time, ev.time, ev.packet);
      }
      return;
    }

    if (!g_.alive(a)) {
      auto& inc = open_incident(p, static_cast<std::size_t>(ev.hop), ev.sent_at);
      arm_timer(p, inc);
      return;
    }
    if (radio_ok) {
      charge(b, EnergyComponent::Rx, data_rx_energy(), ev.time, data_air_, &run);
    }
    auto& inc = open_incident(p, static_cast<std::size_t>(ev.hop), ev.sent_at);
    if (g_.alive(b)) arm_timer(p, inc);
    if (ev.attempt < cfg_.max_attempts) {
      ++run.result.retransmissions;
      schedule_send(p, static_cast<std::size_t>(ev.hop), ev.attempt + 1, ev.time, ev.sent_at,
                    ev.packet);
      return;
    }
    SimEvent beacon = ev;
    beacon.kind = EventKind::BeaconSend;
    beacon.incident = inc.serial;
    queue_.push(beacon);
  }

  void on_beacon_send(const SimEvent& ev) {
    const auto p = static_cast<std::size_t>(ev.path);
    auto& run = paths_[p];
    if (run.result.failed || !run.incident.open || run.incident.serial != ev.incident) return;
    const auto c = beacon_neighbor(g_, ev.from, ev.to);
    trace(ev.time, EventKind::BeaconSend, ev.from, c.value_or(kNoNode), ev.packet,
          run.result.path_id);
    if (!c) {
      conclude(p, FaultCase::SenderFaulty, Detection::NoNeighborFallback, ev.time);
      return;
    }
    if (g_.alive(ev.from)) charge(ev.from, EnergyComponent::Tx, ctrl_tx_energy(run), ev.time, ctrl_air_);
    SimEvent result = ev;
    result.time = ev.time + 2.0 * ctrl_hop_;
    result.kind = EventKind::BeaconResult;
    result.to = *c;
    queue_.push(result);
  }

  void on_beacon_result(const SimEvent& ev) {
    const auto p = static_cast<std::size_t>(ev.path);
    auto& run = paths_[p];
    if (run.result.failed || run.incident.serial != ev.incident) return;
    const NodeId a = ev.from;
    const NodeId c = ev.to;
    const bool ok = beacon_delivered(g_, links_, a, c);
    trace(ev.time, EventKind::BeaconResult, a, c, ev.packet, run.result.path_id);
    if (ok) {
      charge(c, EnergyComponent::Rx, ctrl_rx_energy(), ev.time, ctrl_air_);
      charge(c, EnergyComponent::Tx, ctrl_tx_energy(run), ev.time, ctrl_air_);
      charge(a, EnergyComponent::Rx, ctrl_rx_energy(), ev.time, ctrl_air_);
    }
    const FaultCase verdict = ok ? FaultCase::ReceiverOrLink : FaultCase::SenderFaulty;
    if (run.incident.concluded) {
      report_.faults[record_of_.at(ev.incident)].late_conclusions.emplace_back(ev.time, verdict);
      return;
    }
    conclude(p, verdict, Detection::Beacon, ev.time);
  }

  void on_timer(const SimEvent& ev) {
    const auto p = static_cast<std::size_t>(ev.path);
    auto& run = paths_[p];
    if (run.incident.serial != ev.incident) return;
    if (run.incident.concluded) {
      auto& rec = report_.faults[record_of_.at(ev.incident)];
      rec.timer_fired_at = ev.time;
      rec.late_conclusions.emplace_back(ev.time, FaultCase::SenderFaulty);
      trace(ev.time, EventKind::TimerExpire, ev.from, ev.to, -1, run.result.path_id);
      return;
    }
    if (run.result.failed || !run.incident.open) return;  // delivered in time
    trace(ev.time, EventKind::TimerExpire, ev.from, ev.to, -1, run.result.path_id);
    conclude(p, FaultCase::SenderFaulty, Detection::Timer, ev.time, ev.to);
  }

  void conclude(std::size_t p, FaultCase verdict, Detection how, double t,
                std::optional<NodeId> timer_owner = std::nullopt) {
    auto& run = paths_[p];
    auto& inc = run.incident;
    inc.concluded = true;
    const std::size_t hop = inc.hop;
    const NodeId a = run.nodes[hop];
    const NodeId b = run.nodes[hop + 1];

    FaultRecord rec;
    rec.path_id = run.result.path_id;
    rec.sender = a;
    rec.receiver = b;
    rec.first_attempt = inc.first_attempt;
    rec.expected_arrival = inc.expected_arrival;
    rec.concluded_at = t;
    rec.verdict = verdict;
    rec.detection = how;
    if (how == Detection::Timer) rec.timer_fired_at = t;
    const NodeId failed = verdict == FaultCase::SenderFaulty ? a : b;
    rec.failed_id = failed;
    if (verdict == FaultCase::ReceiverOrLink) {
      rec.initiator = a;
    } else {
      rec.initiator = timer_owner.value_or(b);
    }
    record_of_[inc.serial] = report_.faults.size();
    report_.faults.push_back(rec);
    auto& stored = report_.faults.back();

    if (failed == run.nodes.front() || failed == run.nodes.back()) {
      fail_path(p, t);
      return;
    }
    const std::size_t failed_dev = g_.device_of(failed);
    ReplacementResult rr;
    try {
      rr = replace_failed_node(g_, failed, &table_, rec.initiator);
    } catch (const UnrecoverableFailure&) {
      if (!settled_[failed_dev]) settle(failed_dev, t);
      fail_path(p, t);
      return;
    }
    settle(rr.failed_device, t);
    stored.recovered = true;
    stored.replacement_device = rr.replacement_device;
    stored.replacement_former_id = rr.replacement_former_id;
    ledger_.mark_active(rr.replacement_device, t);

    // The initiator tells the new holder (and through it the neighbours).
    if (g_.alive(rec.initiator) && rec.initiator != failed) {
      charge(rec.initiator, EnergyComponent::Tx, ctrl_tx_energy(run), t, ctrl_air_);
    }
    charge(failed, EnergyComponent::Rx, ctrl_rx_energy(), t, ctrl_air_);
    const double resume = t + ctrl_hop_;
    stored.resumed_at = resume;
    inc.open = false;

    if (verdict == FaultCase::ReceiverOrLink) {
      schedule_send(p, hop, 1, resume, resume, run.injected - 1);
    } else {
      // The upstream node still holds a copy and re-sends it to the new a.
      schedule_send(p, hop - 1, 1, resume, resume, run.injected - 1);
    }
  }

  void fail_path(std::size_t p, double t) {
    auto& run = paths_[p];
    run.result.failed = true;
    run.incident.open = false;
    Packets lost = run.result.assigned - run.injected;
    progress_.queued -= lost;
    if (run.carrying) {
      ++lost;
      --progress_.in_network;
      run.carrying = false;
    }
    run.injected = run.result.assigned;
    run.result.dropped += lost;
    report_.dropped += lost;
    progress_.dropped += lost;
    run.result.delivery_time = t;
  }

  void on_fault(const SimEvent& ev) {
    const auto& f = faults_[static_cast<std::size_t>(ev.fault)];
    if (f.kind == FaultKind::NodeFail) {
      trace(ev.time, EventKind::FaultTrigger, f.node, kNoNode, -1, -1);
      if (g_.alive(f.node)) {
        g_.fail_node(f.node);
        settle(g_.device_of(f.node), ev.time);
      }
    } else {
      trace(ev.time, EventKind::FaultTrigger, f.u, f.v, -1, -1);
      links_.fail(g_.device_of(f.u), g_.device_of(f.v));
    }
  }

  void check_conservation() const {
    if (progress_.delivered + progress_.dropped + progress_.in_network + progress_.queued !=
        progress_.total) {
      throw std::logic_error("packet conservation violated");
    }
  }

  void finish() {
    double duration = 0.0;
    for (const auto& run : paths_) duration = std::max(duration, run.result.delivery_time);
    account_idle_and_sensing(ledger_, duration, g_, cfg_.energy.sensing_power, cfg_.idle_power);
    report_.completion_time = duration;
    for (auto& run : paths_) {
      run.result.traffic_energy = to_joules(run.traffic);
      report_.paths.push_back(run.result);
    }
    for (std::size_t i = 0; i < g_.size(); ++i) {
      report_.ledger.push_back({i, g_.device(i).id, ledger_.at(i)});
    }
    ledger_.apply_to(g_);
  }

  TopologyGraph& g_;
  RoutingTable& table_;
  const FaultScript& faults_;
  TransferConfig cfg_;
  std::ostream* trace_;
  const EventObserver& observer_;

  EnergyLedger ledger_;
  LinkState links_;
  EventQueue queue_;
  std::mt19937_64 rng_;
  std::vector<PathRun> paths_;
  std::vector<bool> settled_;
  std::map<std::uint64_t, std::size_t> record_of_;
  std::uint64_t incident_serial_{0};
  TransferReport report_;
  TransferProgress progress_;
  double ctrl_hop_{0};
  double data_air_{0};
  double ctrl_air_{0};
};

}  // namespace

TransferReport Simulator::run_transfer(TopologyGraph& g, RoutingTable& table, NodeId destination,
                                       const Distributiond& dist, const FaultScript& faults,
                                       const TransferConfig& config) {
  if (active_) throw TransferInProgress("a transfer round is already active");
  const auto* routes = table.routes_to(destination);
  if (!routes) throw InvalidParameter("no routes to destination " + std::to_string(destination));
  struct Guard {
    bool& flag;
    explicit Guard(bool& f) : flag(f) { flag = true; }
    ~Guard() { flag = false; }
  } guard(active_);
  // Routes are copied: replacements update the table while the round runs.
  const std::vector<Route> snapshot = *routes;
  Engine engine(g, table, snapshot, dist, faults, config, trace_, observer_);
  return engine.run();
}

std::string TransferReport::to_text() const {
  std::ostringstream out;
  out.precision(17);
  out << "completion " << completion_time << " total " << total << " delivered " << delivered
      << " dropped " << dropped << '\n';
  for (const auto& p : paths) {
    out << "path " << p.path_id << " hops " << p.hops << " tau " << p.tau << " assigned "
        << p.assigned << " delivered " << p.delivered << " dropped " << p.dropped << " time "
        << p.delivery_time << " retx " << p.retransmissions << " failed " << p.failed
        << " traffic " << p.traffic_energy << '\n';
  }
  for (const auto& f : faults) {
    out << "fault path " << f.path_id << " a " << f.sender << " b " << f.receiver << " "
        << to_string(f.verdict) << " by " << to_string(f.detection) << " at " << f.concluded_at
        << " expected " << f.expected_arrival << " failed " << f.failed_id << " recovered "
        << f.recovered << " device " << f.replacement_device << " resumed " << f.resumed_at;
    if (f.timer_fired_at) out << " timer " << *f.timer_fired_at;
    for (const auto& [t, c] : f.late_conclusions) out << " late " << t << ':' << to_string(c);
    out << '\n';
  }
  for (const auto& n : ledger) {
    out << "node " << n.device << " id " << n.id << " tx " << n.energy.tx << " rx " << n.energy.rx
        << " idle " << n.energy.idle << " sensing " << n.energy.sensing << " residual "
        << n.energy.residual() << '\n';
  }
  return out.str();
}

}  // namespace mpwsn
