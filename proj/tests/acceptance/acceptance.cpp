// Acceptance checks: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "mpwsn/comparison.hpp"
#include "mpwsn/errors.hpp"
#include "oracles/graph_oracle.hpp"
#include "support.hpp"

using namespace mpwsn;
using testing_support::lane_scenario;
using testing_support::ref_energy;
using testing_support::five_path_hops;
using testing_support::profiles;

namespace {

struct Outcome {
  bool pass{true};
  std::string detail;
};

// Every simulation in this binary is checked for energy conservation.
int g_ledger_checks = 0;
int g_ledger_failures = 0;
int g_distribution_checks = 0;
int g_distribution_failures = 0;

void audit(const TransferReport& r, const TopologyGraph& g) {
  for (const auto& n : r.ledger) {
    ++g_ledger_checks;
    const auto& e = n.energy;
    const bool ok = e.initial - e.residual() == e.tx + e.rx + e.idle + e.sensing &&
                    e.residual() >= 0 &&
                    g.device(n.device).residual_energy == to_joules(e.residual());
    if (!ok) ++g_ledger_failures;
  }
}

void audit(const Distributiond& d) {
  ++g_distribution_checks;
  if (d.sum() != d.total) ++g_distribution_failures;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  return s.str();
}

std::vector<double> simulate_delays(Scheme scheme, Packets total, Distributiond* out = nullptr) {
  auto cfg = lane_scenario(five_path_hops(), total);
  auto net = build_network(cfg);
  const auto dist = allocate(scheme, cfg.energy, net.profiles(), total);
  audit(dist);
  Simulator sim;
  const auto r = sim.run_transfer(net.graph, net.table, net.sink, dist, {}, transfer_config(cfg));
  audit(r, net.graph);
  if (out) *out = dist;
  std::vector<double> d;
  for (const auto& p : r.paths) d.push_back(p.delivery_time);
  return d;
}

bool within(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (std::abs(got[i] - want[i]) > tol * want[i]) return false;
  }
  return true;
}

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  const auto d100 = simulate_delays(Scheme::EqualSplit, 100);
  const auto d200 = simulate_delays(Scheme::EqualSplit, 200);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = within(d100, {3.595, 8.794, 1.994, 7.994, 2.794}, 0.005) &&
                  within(d200, {7.194, 17.59, 3.994, 15.994, 5.594}, 0.005) && secs < 5.0;
  return {ok, "D=100 [" + join(d100) + "] D=200 [" + join(d200) + "] in " +
                  std::to_string(secs) + " s"};
}

Outcome criterion2() {
  Distributiond dist;
  const auto d = simulate_delays(Scheme::Adaptive, 100, &dist);
  const std::vector<Packets> want = {20, 8, 37, 9, 26};
  bool dist_ok = dist.allocations.size() == want.size();
  std::ostringstream got;
  for (std::size_t i = 0; i < dist.allocations.size(); ++i) {
    got << (i ? "," : "") << dist.allocations[i].packets;
    if (i < want.size() && std::abs(dist.allocations[i].packets - want[i]) > 1) dist_ok = false;
  }
  const bool delay_ok = within(d, {3.594, 3.514, 3.694, 3.594, 3.634}, 0.01);
  return {dist_ok && delay_ok,
          "distribution [" + got.str() + "] (target 20,8,37,9,26), delays [" + join(d) + "]"};
}

Outcome criterion3() {
  std::ostringstream detail;
  bool ok = true;
  for (Packets total : {100, 200}) {
    auto cfg = lane_scenario(five_path_hops(), total);
    const auto rep = run_comparison(cfg);
    for (const auto& s : rep.schemes) audit(s.distribution);
    ok = ok && rep.orderings_checked && rep.orderings_pass();
    detail << "D=" << total << " delay " << rep.schemes[2].overall_delay << "<"
           << rep.schemes[1].overall_delay << "<" << rep.schemes[0].overall_delay << " energy "
           << rep.schemes[0].energy << "<=" << rep.schemes[2].energy << "<="
           << rep.schemes[1].energy << "; ";
  }
  const std::string cmd = std::string("\"") + MPWSN_CLI + "\" run \"" + MPWSN_SCENARIO_DIR +
                          "/paper_5_1.scenario\" --out \"" + MPWSN_WORK_DIR +
                          "/acceptance_out\" > /dev/null";
  const int status = std::system(cmd.c_str());
  ok = ok && status == 0;
  detail << "cli status " << status;
  return {ok, detail.str()};
}

Outcome criterion4() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> expo(-8.0, 2.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const double a = std::pow(10.0, expo(rng));
    const double b = u(rng) < 0.1 ? 0.0 : 10.0 * u(rng);
    const double c = u(rng) < 0.05 ? 0.0 : 100.0 * u(rng);
    const double x = solve_max_packets(QuadraticCoefficients<double>{a, b, c});
    const double xc = solve_max_packets(QuadraticCoefficients<double>{a, b, c * 1.5 + 1e-3});
    const double xa = solve_max_packets(QuadraticCoefficients<double>{a * 2.0, b, c});
    if (!(x >= 0.0) || std::abs(a * x * x + b * x - c) > 1e-9 * std::max(c, 1.0) || xc < x ||
        xa > x) {
      ++bad;
    }
  }
  return {bad == 0, "10000 draws, " + std::to_string(bad) + " violations"};
}

Outcome criterion5() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> hops(1, 30);
  auto ep = ref_energy();
  int root_bad = 0;
  int bound_bad = 0;
  int bound_checked = 0;
  for (Packets total : {100, 200}) {
    const auto paths = profiles(five_path_hops());
    const double budget = average_edp(ep, paths, static_cast<double>(total));
    for (const auto& p : paths) {
      const double x = solve_max_packets(coefficients_for_path(ep, p, budget));
      if (std::abs(path_edp(ep, p, x) - budget) > 1e-6 * budget) ++root_bad;
    }
    const auto d = allocate(Scheme::Adaptive, ep, paths, total);
    audit(d);
    ++bound_checked;
    if (!verify_edp_bound(ep, paths, d).pass) ++bound_bad;
  }
  for (int i = 0; i < 5000 && bound_checked < 1000; ++i) {
    ep.sensing_power = 0.05 * u(rng);
    std::vector<PathProfiled> paths;
    const int n = 2 + static_cast<int>(u(rng) * 6);
    for (int j = 0; j < n; ++j) paths.push_back({j + 1, hops(rng), 0.01 + 0.03 * u(rng), 12.0});
    const Packets total = 10 + static_cast<Packets>(400 * u(rng));
    const double budget = average_edp(ep, paths, static_cast<double>(total));
    for (const auto& p : paths) {
      const double x = solve_max_packets(coefficients_for_path(ep, p, budget));
      if (std::abs(path_edp(ep, p, x) - budget) > 1e-6 * budget) ++root_bad;
    }
    const auto d = allocate(Scheme::Adaptive, ep, paths, total);
    audit(d);
    double sum = 0;
    for (double c : d.raw_capacity) sum += c;
    bool headroom = true;
    for (double c : d.raw_capacity) headroom = headroom && c * (1.0 - total / sum) >= 1.0;
    if (!headroom) continue;
    ++bound_checked;
    if (!verify_edp_bound(ep, paths, d).pass) ++bound_bad;
  }
  return {root_bad == 0 && bound_bad == 0,
          std::to_string(root_bad) + " root mismatches, " + std::to_string(bound_bad) + "/" +
              std::to_string(bound_checked) + " normalized distributions over budget"};
}

Outcome criterion6() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> hops(1, 25);
  double worst_t = 0.0;
  double worst_e = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::vector<int> h;
    const int n = 1 + static_cast<int>(u(rng) * 5);
    for (int j = 0; j < n; ++j) h.push_back(hops(rng));
    auto cfg = lane_scenario(h, 0);
    cfg.link.link_delay = 0.002 * u(rng);
    cfg.link.queue_delay = 0.002 * u(rng);
    cfg.energy.amp_coeff = 1e-6 * u(rng);
    cfg.energy.tx_power = 1e-4 + 2e-3 * u(rng);
    cfg.energy.rx_power = 1e-4 + 2e-3 * u(rng);
    auto net = build_network(cfg);
    Distributiond dist;
    for (int j = 0; j < n; ++j) {
      const auto c = 1 + static_cast<Packets>(u(rng) * 60);
      dist.allocations.push_back({j + 1, c});
      dist.total += c;
    }
    audit(dist);
    Simulator sim;
    const auto r = sim.run_transfer(net.graph, net.table, net.sink, dist, {}, transfer_config(cfg));
    audit(r, net.graph);
    const auto prof = net.profiles();
    for (int j = 0; j < n; ++j) {
      const auto& pr = r.paths[static_cast<std::size_t>(j)];
      const double load = static_cast<double>(dist.allocations[static_cast<std::size_t>(j)].packets);
      const double t = path_delay(load, prof[static_cast<std::size_t>(j)]);
      const double e = path_traffic_energy(cfg.energy, prof[static_cast<std::size_t>(j)], load);
      worst_t = std::max(worst_t, std::abs(pr.delivery_time - t) / t);
      worst_e = std::max(worst_e, std::abs(pr.traffic_energy - e) / e);
    }
  }
  std::ostringstream s;
  s << "100 scenarios, max rel delay error " << worst_t << ", max rel energy error " << worst_e;
  return {worst_t <= 1e-9 && worst_e <= 1e-6, s.str()};
}

Outcome criterion7() {
  const auto scenario = [](const FaultScript& faults) {
    auto cfg = lane_scenario({3}, 10);
    auto net = build_network(cfg);
    Distributiond dist;
    dist.total = 10;
    dist.allocations = {{1, 10}};
    Simulator sim;
    std::ostringstream trace;
    sim.set_trace(&trace);
    auto r = sim.run_transfer(net.graph, net.table, net.sink, dist, faults, transfer_config(cfg));
    audit(r, net.graph);
    return std::pair{r, trace.str()};
  };
  const double tau = 0.02;
  const int m = 5;
  bool ok = true;
  std::ostringstream detail;
  const auto check = [&](const FaultScript& faults, FaultCase want, const char* name) {
    const auto [r, trace] = scenario(faults);
    const auto [r2, trace2] = scenario(faults);
    const bool repeat = r.to_text() == r2.to_text() && trace == trace2;
    bool good = r.faults.size() == 1 && r.delivered == 10 && r.dropped == 0 && repeat;
    if (!r.faults.empty()) {
      const auto& f = r.faults[0];
      good = good && f.verdict == want && f.recovered && f.timer_fired_at &&
             std::abs(*f.timer_fired_at - f.expected_arrival - m * tau) <= 1e-12;
      detail << name << ": " << to_string(f.verdict) << " via " << to_string(f.detection)
             << ", timer at expected+" << (f.timer_fired_at ? *f.timer_fired_at - f.expected_arrival : -1)
             << ", delivered " << r.delivered << (repeat ? ", repeatable; " : ", NOT repeatable; ");
    }
    ok = ok && good;
  };
  check({{0.03, FaultKind::NodeFail, 2, 0, 0}}, FaultCase::SenderFaulty, "node failure");
  check({{0.0, FaultKind::LinkFail, 0, 2, 3}}, FaultCase::ReceiverOrLink, "link failure");
  return {ok, detail.str()};
}

Outcome criterion8() {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int overlap = 0;
  int over_max = 0;
  int small = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 3 + static_cast<int>(u(rng) * 48);  // 3..50
    const double p = n <= 12 ? 0.1 + 0.35 * u(rng) : 0.05 + 0.3 * u(rng);
    TopologyGraph g(0.0);
    oracle::SmallGraph ref{n, std::vector<std::vector<int>>(n), std::vector<bool>(n, true)};
    for (int v = 0; v < n; ++v) {
      Node node;
      node.id = static_cast<NodeId>(v);
      node.pos = {u(rng), u(rng)};
      node.is_redundant = v >= 2 && u(rng) < 0.1;
      ref.relay_ok[v] = !node.is_redundant;
      g.add_node(node);
    }
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (u(rng) < p) {
          g.add_link(static_cast<NodeId>(a), static_cast<NodeId>(b));
          ref.adj[a].push_back(b);
          ref.adj[b].push_back(a);
        }
      }
    }
    const auto routes = discover_disjoint_paths(g, 0, 1, 0);
    std::set<NodeId> interior;
    int direct = 0;
    for (const auto& r : routes) {
      if (r.nodes.size() == 2) ++direct;
      for (std::size_t k = 1; k + 1 < r.nodes.size(); ++k) {
        if (!interior.insert(r.nodes[k]).second) ++overlap;
      }
    }
    if (direct > 1) ++overlap;
    if (n <= 12) {
      ++small;
      const auto brute = oracle::max_disjoint_bruteforce(ref, 0, 1);
      if (!brute || static_cast<int>(routes.size()) > *brute) ++over_max;
    }
  }
  return {overlap == 0 && over_max == 0,
          "1000 graphs, " + std::to_string(overlap) + " shared nodes, " +
              std::to_string(over_max) + "/" + std::to_string(small) +
              " small graphs above the exhaustive maximum"};
}

Outcome criterion9() {
  // Extra traffic with faults, loss and depletion on top of every simulation above.
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    auto cfg = lane_scenario({3, 5, 8}, 30);
    cfg.loss_probability = 0.3 * u(rng);
    cfg.seed = rng();
    cfg.initial_energy = u(rng) < 0.3 ? 2e-3 * u(rng) : 23760;
    auto net = build_network(cfg);
    const auto dist = allocate(Scheme::EqualSplit, cfg.energy, net.profiles(), cfg.packets);
    audit(dist);
    FaultScript faults;
    if (u(rng) < 0.5) faults.push_back({0.1 * u(rng), FaultKind::NodeFail, 3, 0, 0});
    if (u(rng) < 0.5) faults.push_back({0.1 * u(rng), FaultKind::LinkFail, 0, 5, 6});
    Simulator sim;
    const auto r = sim.run_transfer(net.graph, net.table, net.sink, dist, faults, transfer_config(cfg));
    audit(r, net.graph);
    if (r.delivered + r.dropped != r.total) ++g_ledger_failures;
  }
  return {g_ledger_failures == 0 && g_distribution_failures == 0,
          std::to_string(g_ledger_checks) + " node ledgers, " + std::to_string(g_ledger_failures) +
              " mismatches; " + std::to_string(g_distribution_checks) + " distributions, " +
              std::to_string(g_distribution_failures) + " with sum != D"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 equal-split delays", criterion1},   {"2 adaptive split", criterion2},
      {"3 scheme orderings", criterion3},     {"4 solver", criterion4},
      {"5 EDP bound", criterion5},            {"6 analytic agreement", criterion6},
      {"7 fault protocol", criterion7},       {"8 disjointness", criterion8},
      {"9 conservation", criterion9},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed;
}
