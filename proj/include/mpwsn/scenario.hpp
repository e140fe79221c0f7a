#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mpwsn/distributor.hpp"
#include "mpwsn/routing.hpp"
#include "mpwsn/simulator.hpp"

namespace mpwsn {

struct FieldSettings {
  FieldSpec spec;
  NodeId source{0};
  NodeId sink{0};
  int max_paths{5};
  std::string topology_file;  ///< optional; replaces random deployment
};

struct PathSettings {
  std::vector<int> hops;
  double distance{0};          ///< T, source to sink
  std::vector<double> tau;     ///< optional per-path override
  int redundant_per_path{2};
};

struct ScenarioConfig {
  std::optional<FieldSettings> field;
  std::optional<PathSettings> paths;
  EnergyParamsd energy;
  LinkParamsd link;
  Packets packets{0};
  double initial_energy{0};
  double idle_power{0};
  int max_attempts{5};
  double control_bits{100};
  double loss_probability{0};
  std::uint64_t seed{1};
  std::vector<Scheme> schemes{Scheme::SinglePath, Scheme::EqualSplit, Scheme::Adaptive};
  /// Nodes off the loaded paths whose sensing drain counts toward energy totals.
  double background_nodes{0};
  TauMode tau_mode{TauMode::Analytic};
  FaultScript faults;
  std::string out;
  std::filesystem::path base_dir;  ///< directory of the scenario file
};

/// Parses "key = value" lines ('#' starts a comment). Throws ScenarioError
/// naming the line or the missing field.
ScenarioConfig parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& file);

/// Deployed topology plus the source's routing table toward the sink.
struct Network {
  TopologyGraph graph;
  RoutingTable table;
  NodeId source{0};
  NodeId sink{0};

  const std::vector<Route>& routes() const;
  std::vector<PathProfiled> profiles() const;
};

/// Field mode deploys (or reads) the field and runs discovery. Path mode
/// lays out one straight lane per hop count, with unlinked spare nodes
/// beside each lane; routes keep the configured order.
Network build_network(const ScenarioConfig& cfg);

TransferConfig transfer_config(const ScenarioConfig& cfg);

}  // namespace mpwsn
