#include "mpwsn/comparison.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "mpwsn/errors.hpp"

namespace mpwsn {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
  if (!out) throw Error("error writing " + p.string());
}

}  // namespace

const SchemeResult* ComparisonReport::find(Scheme s) const {
  for (const auto& r : schemes) {
    if (r.scheme == s) return &r;
  }
  return nullptr;
}

double scheme_energy(const TransferReport& report, const std::vector<std::size_t>& devices,
                     double background_nodes, double sensing_power) {
  Picojoules used = 0;
  for (std::size_t d : devices) used += report.ledger.at(d).energy.consumed();
  return to_joules(used) + background_nodes * sensing_power * report.completion_time;
}

ComparisonReport run_comparison(const ScenarioConfig& cfg, std::ostream* trace) {
  const Network base = build_network(cfg);
  ComparisonReport report;
  report.packets = cfg.packets;
  const auto& routes = base.routes();
  const auto profiles = base.profiles();
  for (const auto& p : profiles) report.paths.push_back({p.path_id, p.hops, p.tau});
  for (const auto& w : cfg.energy.validate()) report.warnings.push_back(w);

  for (Scheme scheme : cfg.schemes) {
    SchemeResult res;
    res.scheme = scheme;
    res.distribution = allocate(scheme, cfg.energy, profiles, cfg.packets);
    res.warnings = res.distribution.warnings;

    Network net = base;
    std::set<std::size_t> devices;
    for (const auto& r : routes) {
      if (res.distribution.packets_for(r.profile.path_id) == 0) continue;
      for (NodeId id : r.nodes) devices.insert(net.graph.device_of(id));
    }
    Simulator sim;
    if (trace) {
      *trace << "# scheme " << to_string(scheme) << '\n';
      sim.set_trace(trace);
    }
    res.transfer = sim.run_transfer(net.graph, net.table, net.sink, res.distribution, cfg.faults,
                                    transfer_config(cfg));
    for (const auto& f : res.transfer.faults) {
      if (f.recovered) devices.insert(f.replacement_device);
    }
    for (const auto& info : report.paths) {
      double d = 0.0;
      for (const auto& pr : res.transfer.paths) {
        if (pr.path_id == info.path_id) d = pr.delivery_time;
      }
      res.path_delay.push_back(d);
      res.overall_delay = std::max(res.overall_delay, d);
    }
    res.energy = scheme_energy(res.transfer, {devices.begin(), devices.end()},
                               cfg.background_nodes, cfg.energy.sensing_power);
    res.delivered = res.transfer.delivered;
    res.dropped = res.transfer.dropped;
    if (res.dropped > 0) {
      res.warnings.push_back(std::to_string(res.dropped) + " packets dropped");
    }
    report.schemes.push_back(std::move(res));
  }

  const auto* s1 = report.find(Scheme::SinglePath);
  const auto* s2 = report.find(Scheme::EqualSplit);
  const auto* s3 = report.find(Scheme::Adaptive);
  if (s1 && s2 && s3) {
    report.orderings_checked = true;
    report.delay_order =
        s3->overall_delay < s2->overall_delay && s2->overall_delay < s1->overall_delay;
    report.energy_order = s1->energy <= s3->energy && s3->energy <= s2->energy;
    report.energy_closer = std::abs(s3->energy - s1->energy) < std::abs(s3->energy - s2->energy);
  }
  return report;
}

std::string distribution_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "path_id,hops";
  for (const auto& s : report.schemes) out << ',' << to_string(s.scheme);
  out << '\n';
  if (report.schemes.empty()) return out.str();
  for (const auto& p : report.paths) {
    out << p.path_id << ',' << p.hops;
    for (const auto& s : report.schemes) out << ',' << s.distribution.packets_for(p.path_id);
    out << '\n';
  }
  return out.str();
}

std::string delays_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "scheme,path_id,delay_s\n";
  for (const auto& s : report.schemes) {
    for (std::size_t i = 0; i < report.paths.size(); ++i) {
      out << to_string(s.scheme) << ',' << report.paths[i].path_id << ','
          << fmt(s.path_delay[i]) << '\n';
    }
    out << to_string(s.scheme) << ",overall," << fmt(s.overall_delay) << '\n';
  }
  return out.str();
}

std::string energy_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "scheme,energy_j,delivered,dropped\n";
  for (const auto& s : report.schemes) {
    out << to_string(s.scheme) << ',' << fmt(s.energy) << ',' << s.delivered << ','
        << s.dropped << '\n';
  }
  return out.str();
}

std::string render_report(const ComparisonReport& report) {
  std::ostringstream out;
  out << "packets: " << report.packets << '\n';
  out << "paths:";
  for (const auto& p : report.paths) {
    out << ' ' << p.path_id << "(H=" << p.hops << ", tau=" << fmt(p.tau) << ')';
  }
  out << "\n\n";
  for (const auto& s : report.schemes) {
    out << "scheme " << scheme_number(s.scheme) << " (" << to_string(s.scheme) << ")\n";
    out << "  distribution:";
    for (const auto& a : s.distribution.allocations) out << ' ' << a.packets;
    out << "\n  delays:";
    for (double d : s.path_delay) out << ' ' << fmt(d);
    out << "\n  overall delay: " << fmt(s.overall_delay) << " s\n";
    out << "  energy: " << fmt(s.energy) << " J\n";
    out << "  delivered: " << s.delivered << "  dropped: " << s.dropped << '\n';
    for (const auto& w : s.warnings) out << "  warning: " << w << '\n';
  }
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  out << '\n';
  if (!report.orderings_checked) {
    out << "ordering checks: skipped (needs schemes 1, 2 and 3)\n";
    return out.str();
  }
  const auto verdict = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  out << "delay S3 < S2 < S1: " << verdict(report.delay_order) << '\n';
  out << "energy E1 <= E3 <= E2: " << verdict(report.energy_order) << '\n';
  out << "energy |E3-E1| < |E3-E2|: " << verdict(report.energy_closer) << '\n';
  return out.str();
}

void emit_outputs(const ComparisonReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "distribution.csv", distribution_csv(report));
  write_file(dir / "delays.csv", delays_csv(report));
  write_file(dir / "energy.csv", energy_csv(report));
  write_file(dir / "report.txt", render_report(report));
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mpwsn
